#include "ql/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

#include "ql/errors.hpp"

namespace ql::lattice {

namespace {

// Floating-point LLL on real row vectors with an integer transformation
// tracked alongside. Rows of `real` are reduced in place; `coords` receives
// the same row operations.
void lll_rows(std::vector<Eigen::VectorXd>& real,
              std::vector<Eigen::VectorXi>& coords, double delta = 0.75) {
  const int k = static_cast<int>(real.size());
  auto gram = [&](std::vector<Eigen::VectorXd>& star,
                  std::vector<std::vector<double>>& mu) {
    for (int i = 0; i < k; ++i) {
      star[i] = real[i];
      for (int j = 0; j < i; ++j) {
        double denom = star[j].squaredNorm();
        mu[i][j] = denom > 0 ? real[i].dot(star[j]) / denom : 0.0;
        star[i] -= mu[i][j] * star[j];
      }
    }
  };
  std::vector<Eigen::VectorXd> star(k);
  std::vector<std::vector<double>> mu(k, std::vector<double>(k, 0.0));
  gram(star, mu);
  int i = 1;
  int guard = 0;
  const int guard_max = 20000;
  while (i < k && ++guard < guard_max) {
    for (int j = i - 1; j >= 0; --j) {
      double r = std::round(mu[i][j]);
      if (r != 0.0) {
        real[i] -= r * real[j];
        coords[i] -= static_cast<int>(r) * coords[j];
        gram(star, mu);
      }
    }
    double lhs = star[i].squaredNorm();
    double rhs = (delta - mu[i][i - 1] * mu[i][i - 1]) * star[i - 1].squaredNorm();
    if (lhs >= rhs) {
      ++i;
    } else {
      std::swap(real[i], real[i - 1]);
      std::swap(coords[i], coords[i - 1]);
      gram(star, mu);
      i = std::max(i - 1, 1);
    }
  }
}

long double dot_ld(const Eigen::VectorXi& m, const Eigen::VectorXd& ell) {
  long double s = 0.0L;
  for (int i = 0; i < m.size(); ++i)
    s += static_cast<long double>(m[i]) * static_cast<long double>(ell[i]);
  return s;
}

int integer_rank(const std::vector<Eigen::VectorXi>& rows, int n) {
  Eigen::MatrixXd m(rows.size(), n);
  for (size_t i = 0; i < rows.size(); ++i) m.row(i) = rows[i].cast<double>();
  return m.rows() == 0 ? 0
                       : Eigen::FullPivLU<Eigen::MatrixXd>(m).rank();
}

}  // namespace

std::vector<Eigen::VectorXi> integer_relations(const Eigen::VectorXd& ell,
                                               long long Q) {
  const int n = static_cast<int>(ell.size());
  if (ell.lpNorm<Eigen::Infinity>() == 0.0)
    throw std::invalid_argument("integer_relations: ell is zero");
  if (Q < 2) throw std::invalid_argument("integer_relations: Q must be >= 2");

  const Eigen::VectorXd ellhat = ell / ell.lpNorm<Eigen::Infinity>();
  const double N = 1e12;

  std::vector<Eigen::VectorXd> rows(n);
  std::vector<Eigen::VectorXi> coords(n);
  for (int i = 0; i < n; ++i) {
    rows[i] = Eigen::VectorXd::Zero(n + 1);
    rows[i][i] = 1.0;
    rows[i][n] = N * ellhat[i];
    coords[i] = Eigen::VectorXi::Zero(n);
    coords[i][i] = 1;
  }
  lll_rows(rows, coords);

  std::vector<Eigen::VectorXi> relations;
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXi& m = coords[i];
    long long minf = 0, m1 = 0;
    for (int s = 0; s < n; ++s) {
      minf = std::max(minf, static_cast<long long>(std::abs(m[s])));
      m1 += std::abs(m[s]);
    }
    if (minf == 0) continue;
    long double resid = std::abs(dot_ld(m, ellhat));
    // A genuine relation leaves only the double-rounding noise of ell itself.
    if (resid < 5e-16L * static_cast<long double>(m1)) {
      if (minf > Q) continue;
      if (10 * minf > Q)
        throw AmbiguousAtBound(
            "integer relation found with coefficients near the denominator "
            "bound; result unreliable");
      relations.push_back(m);
    }
  }
  return relations;
}

int irrationality_degree(const Eigen::VectorXd& ell, long long Q) {
  const int n = static_cast<int>(ell.size());
  auto rel = integer_relations(ell, Q);
  int rank = integer_rank(rel, n);
  return n - rank;
}

Eigen::MatrixXi unimodular_column_reduction(const Eigen::VectorXi& ell) {
  const int n = static_cast<int>(ell.size());
  Eigen::VectorXi v = ell;
  Eigen::MatrixXi u = Eigen::MatrixXi::Identity(n, n);
  if (v.isZero())
    throw std::invalid_argument("unimodular_column_reduction: zero covector");

  // Column operations on (v; U) until v = (g, 0, ..., 0).
  while (true) {
    int pivot = -1;
    for (int j = 0; j < n; ++j)
      if (v[j] != 0 && (pivot < 0 || std::abs(v[j]) < std::abs(v[pivot])))
        pivot = j;
    bool done = true;
    for (int j = 0; j < n; ++j) {
      if (j == pivot || v[j] == 0) continue;
      int q = v[j] / v[pivot];
      v[j] -= q * v[pivot];
      u.col(j) -= q * u.col(pivot);
      if (v[j] != 0) done = false;
    }
    if (done) {
      if (pivot != 0) {
        v.row(0).swap(v.row(pivot));
        u.col(0).swap(u.col(pivot));
      }
      break;
    }
  }
  if (v[0] < 0) {
    v[0] = -v[0];
    u.col(0) = -u.col(0);
  }
  return u;
}

Eigen::MatrixXi lll_reduce(const Eigen::MatrixXi& basis) {
  const int k = static_cast<int>(basis.rows());
  const int n = static_cast<int>(basis.cols());
  std::vector<Eigen::VectorXd> rows(k);
  std::vector<Eigen::VectorXi> coords(k);
  for (int i = 0; i < k; ++i) {
    rows[i] = basis.row(i).cast<double>();
    coords[i] = Eigen::VectorXi::Zero(k);
    coords[i][i] = 1;
  }
  lll_rows(rows, coords);
  Eigen::MatrixXi out(k, n);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = static_cast<int>(std::llround(rows[i][j]));
  return out;
}

}  // namespace ql::lattice
