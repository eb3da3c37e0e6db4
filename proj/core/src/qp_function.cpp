#include "ql/qp_function.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "ql/errors.hpp"

namespace ql {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

AffineEmbedding::AffineEmbedding(Eigen::MatrixXd a, Eigen::VectorXd offset)
    : A(std::move(a)), x0(std::move(offset)) {
  if (A.rows() != x0.size())
    throw std::invalid_argument("AffineEmbedding: offset dimension mismatch");
  if (A.rows() < A.cols())
    throw std::invalid_argument("AffineEmbedding: n must be >= k");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  double smin = svd.singularValues().tail(1)(0);
  if (smin < 1e-12 * (1.0 + svd.singularValues()(0)))
    throw std::invalid_argument("AffineEmbedding: A is rank deficient");
}

QuasiperiodicFunction::QuasiperiodicFunction(TrigSeries series,
                                             AffineEmbedding embedding)
    : series_(std::move(series)), embedding_(std::move(embedding)) {
  if (series_.dimension() != embedding_.superspace_dim())
    throw std::invalid_argument(
        "QuasiperiodicFunction: series dimension != embedding rows");
}

double QuasiperiodicFunction::evaluate(const Eigen::VectorXd& y) const {
  return series_.evaluate(embedding_.map(y));
}

Eigen::VectorXd QuasiperiodicFunction::gradient(const Eigen::VectorXd& y) const {
  return embedding_.A.transpose() * series_.gradient(embedding_.map(y));
}

std::vector<double> QuasiperiodicFunction::grid_values(
    const Eigen::Vector2d& origin, double h, int count) const {
  if (physical_dim() != 2)
    throw std::invalid_argument("grid_values: physical dimension must be 2");
  std::vector<double> out(static_cast<size_t>(count) * count, 0.0);
  const auto terms = series_.terms();
  const Eigen::MatrixXd& A = embedding_.A;
  const Eigen::VectorXd& x0 = embedding_.x0;
  const int n = series_.dimension();
  for (const auto& term : terms) {
    // induced wave covector kappa = A^T m and phase offset m.x0
    double k1 = 0.0, k2 = 0.0, p0 = 0.0;
    for (int s = 0; s < n; ++s) {
      k1 += term.freq[s] * A(s, 0);
      k2 += term.freq[s] * A(s, 1);
      p0 += term.freq[s] * x0[s];
    }
    const std::complex<double> step1 = std::polar(1.0, kTwoPi * k1 * h);
    const std::complex<double> step2 = std::polar(1.0, kTwoPi * k2 * h);
    const std::complex<double> base =
        term.coeff *
        std::polar(1.0, kTwoPi * (p0 + k1 * origin[0] + k2 * origin[1]));
    std::complex<double> row = base;
    for (int i = 0; i < count; ++i) {
      // re-anchor each row to keep recurrence drift bounded
      if ((i & 63) == 0)
        row = base * std::polar(1.0, kTwoPi * k1 * h * i);
      std::complex<double> v = row;
      double* dst = out.data() + static_cast<size_t>(i) * count;
      for (int j = 0; j < count; ++j) {
        if ((j & 63) == 0)
          v = row * std::polar(1.0, kTwoPi * k2 * h * j);
        dst[j] += v.real();
        v *= step2;
      }
      row *= step1;
    }
  }
  return out;
}

Eigen::VectorXd related_shift(const TrigSeries& f, const AffineEmbedding& emb1,
                              const AffineEmbedding& emb2, double epsilon,
                              double search_radius) {
  if (epsilon <= 0.0) throw std::invalid_argument("related_shift: epsilon <= 0");
  if (emb1.A != emb2.A)
    throw std::invalid_argument("related_shift: embeddings must share A");
  const int n = emb1.superspace_dim();
  const int k = emb1.physical_dim();
  const Eigen::MatrixXd& A = emb1.A;
  // Need A a + x0_2 = x0_1 + p for some p in Z^n.
  const Eigen::VectorXd target0 = emb1.x0 - emb2.x0;

  const auto solver = A.colPivHouseholderQr();
  const double lip = f.gradient_bound();

  // Enumerate candidate integer vectors p in a box sized from the radius.
  std::vector<int> lo(n), hi(n);
  long long total = 1;
  for (int s = 0; s < n; ++s) {
    double reach = A.row(s).norm() * search_radius;
    lo[s] = static_cast<int>(std::floor(target0[s] - reach)) - 1;
    hi[s] = static_cast<int>(std::ceil(target0[s] + reach)) + 1;
    total *= (hi[s] - lo[s] + 1);
    if (total > 20000000)
      throw std::invalid_argument("related_shift: search box too large");
  }

  struct Candidate {
    double score;
    Eigen::VectorXd a;
  };
  std::vector<Candidate> cands;
  std::vector<int> p(n, 0);
  std::function<void(int)> rec = [&](int s) {
    if (s == n) {
      Eigen::VectorXd t = target0;
      for (int i = 0; i < n; ++i) t[i] += p[i];
      Eigen::VectorXd a = solver.solve(t);
      if (a.norm() > search_radius) return;
      double resid = (A * a - t).norm();
      cands.push_back({resid, a});
      return;
    }
    for (p[s] = lo[s]; p[s] <= hi[s]; ++p[s]) rec(s + 1);
  };
  rec(0);
  std::stable_sort(cands.begin(), cands.end(),
                   [](const Candidate& x, const Candidate& y) {
                     if (x.score != y.score) return x.score < y.score;
                     return x.a.norm() < y.a.norm();
                   });

  // Deterministic verification sample over a window in the physical space.
  QuasiperiodicFunction phi1(f, emb1), phi2(f, emb2);
  auto verified = [&](const Eigen::VectorXd& a) {
    double worst = 0.0;
    const int per_axis = (k == 1) ? 257 : 33;
    std::vector<int> idx(k, 0);
    std::function<bool(int)> sample = [&](int d) -> bool {
      if (d == k) {
        Eigen::VectorXd y(k);
        for (int i = 0; i < k; ++i) y[i] = -8.0 + 16.0 * idx[i] / (per_axis - 1);
        double diff = std::abs(phi2.evaluate(y + a) - phi1.evaluate(y));
        worst = std::max(worst, diff);
        return worst < epsilon;
      }
      for (idx[d] = 0; idx[d] < per_axis; ++idx[d])
        if (!sample(d + 1)) return false;
      return true;
    };
    return sample(0);
  };

  for (const auto& cand : cands) {
    if (cand.score * lip > 10.0 * epsilon) break;  // sorted by residual
    if (verified(cand.a)) return cand.a;
  }
  throw NotFound("related_shift: no shift within search radius achieves epsilon");
}

}  // namespace ql
