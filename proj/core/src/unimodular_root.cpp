#include "ql/unimodular_root.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "ql/errors.hpp"

namespace ql {

namespace {

using Poly = std::vector<long long>;  // coefficients, constant term first

int degree(const Poly& p) {
  int d = static_cast<int>(p.size()) - 1;
  while (d > 0 && p[d] == 0) --d;
  return d;
}

// Exact division q = num / den, returns nullopt when the division leaves a
// remainder.
std::optional<Poly> divide_exact(const Poly& num, const Poly& den) {
  int dn = degree(num), dd = degree(den);
  if (dd > dn) return std::nullopt;
  Poly rem = num;
  Poly quo(dn - dd + 1, 0);
  for (int i = dn - dd; i >= 0; --i) {
    long long lead = rem[i + dd];
    if (lead % den[dd] != 0) return std::nullopt;
    long long q = lead / den[dd];
    quo[i] = q;
    for (int j = 0; j <= dd; ++j) rem[i + j] -= q * den[j];
  }
  for (long long c : rem)
    if (c != 0) return std::nullopt;
  return quo;
}

std::complex<double> eval_poly(const Poly& p, std::complex<double> z) {
  std::complex<double> acc = 0.0;
  for (int i = degree(p); i >= 0; --i) acc = acc * z + static_cast<double>(p[i]);
  return acc;
}

int euler_phi(int d) {
  int result = d, n = d;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

}  // namespace

std::vector<long long> cyclotomic(int d) {
  // Phi_d = (x^d - 1) / prod_{e | d, e < d} Phi_e
  Poly num(d + 1, 0);
  num[0] = -1;
  num[d] = 1;
  for (int e = 1; e < d; ++e) {
    if (d % e != 0) continue;
    auto q = divide_exact(num, cyclotomic(e));
    num = *q;  // exact by construction
  }
  return num;
}

UnimodularRootResult reciprocal_unimodular_root(const std::vector<long long>& a) {
  const int n = static_cast<int>(a.size()) + 1;
  for (size_t s = 0; s + 1 < a.size(); ++s)
    if (a[s] != a[a.size() - 1 - s])
      throw std::invalid_argument(
          "reciprocal_unimodular_root: coefficients not palindromic");

  // Full coefficient vector, constant term first: 1, a_{n-1}, ..., a_1, 1.
  Poly p(n + 1, 0);
  p[0] = 1;
  p[n] = 1;
  for (int s = 1; s < n; ++s) p[s] = a[n - 1 - s];

  // Collect unimodular roots as angles psi in [0, pi].
  std::vector<double> angles;
  {
    long long at1 = 0, atm1 = 0;
    for (int i = 0; i <= n; ++i) {
      at1 += p[i];
      atm1 += (i % 2 == 0) ? p[i] : -p[i];
    }
    if (at1 == 0) angles.push_back(0.0);
    if (atm1 == 0) angles.push_back(std::numbers::pi);
  }

  // Deflate z = -1 roots until the degree is even, then reduce by
  // t = z + 1/z to an integer polynomial on [-2, 2].
  Poly q = p;
  while (degree(q) % 2 == 1) {
    Poly lin = {1, 1};  // z + 1
    auto d = divide_exact(q, lin);
    if (!d) break;  // odd-degree palindromic always has z = -1; guard anyway
    q = *d;
  }
  const int m = degree(q) / 2;
  if (degree(q) % 2 == 0 && m >= 1) {
    // T_j(t) = z^j + z^-j: T_0 = 2, T_1 = t, T_j = t T_{j-1} - T_{j-2}.
    std::vector<Poly> cheb(m + 1);
    cheb[0] = {2};
    if (m >= 1) cheb[1] = {0, 1};
    for (int j = 2; j <= m; ++j) {
      Poly t(j + 1, 0);
      for (size_t i = 0; i < cheb[j - 1].size(); ++i) t[i + 1] += cheb[j - 1][i];
      for (size_t i = 0; i < cheb[j - 2].size(); ++i) t[i] -= cheb[j - 2][i];
      cheb[j] = t;
    }
    Poly qt(m + 1, 0);
    qt[0] += q[m];  // middle coefficient enters once
    for (int j = 1; j <= m; ++j)
      for (size_t i = 0; i < cheb[j].size(); ++i) qt[i] += q[m + j] * cheb[j][i];

    // Real roots of qt in [-2, 2] via companion matrix + Newton polish.
    int dq = degree(qt);
    if (dq >= 1) {
      Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(dq, dq);
      for (int i = 0; i < dq; ++i)
        comp(0, i) = -static_cast<double>(qt[dq - 1 - i]) / qt[dq];
      for (int i = 1; i < dq; ++i) comp(i, i - 1) = 1.0;
      Eigen::EigenSolver<Eigen::MatrixXd> es(comp);
      for (int i = 0; i < dq; ++i) {
        std::complex<double> ev = es.eigenvalues()[i];
        if (std::abs(ev.imag()) > 1e-8) continue;
        double t = ev.real();
        if (t < -2.0 - 1e-8 || t > 2.0 + 1e-8) continue;
        for (int it = 0; it < 60; ++it) {  // Newton on qt
          double v = 0.0, dv = 0.0;
          for (int j2 = dq; j2 >= 0; --j2) {
            dv = dv * t + v;
            v = v * t + static_cast<double>(qt[j2]);
          }
          if (std::abs(dv) < 1e-14) break;
          double step = v / dv;
          t -= step;
          if (std::abs(step) < 1e-15) break;
        }
        t = std::clamp(t, -2.0, 2.0);
        angles.push_back(std::acos(t / 2.0));
      }
    }
  }

  std::sort(angles.begin(), angles.end());
  angles.erase(std::unique(angles.begin(), angles.end(),
                           [](double x, double y) { return std::abs(x - y) < 1e-9; }),
               angles.end());
  // Keep only true roots of P.
  std::vector<double> roots;
  for (double psi : angles) {
    std::complex<double> th = std::polar(1.0, psi);
    if (std::abs(eval_poly(p, th)) < 1e-6 * (1 + std::abs(p[0])) * n) roots.push_back(psi);
  }
  if (roots.empty())
    throw NoUnimodularRoot("reciprocal_unimodular_root: no root on the unit circle");

  double psi = roots.front();
  // Prefer the smallest strictly positive angle when available.
  for (double r : roots)
    if (r > 1e-12) {
      psi = r;
      break;
    }
  std::complex<double> theta = std::polar(1.0, psi);

  // Rationality of psi / 2pi: theta is a root of unity iff some cyclotomic
  // polynomial Phi_d with phi(d) <= n divides P and theta is one of its roots.
  double best = 1e9;
  const int dmax = 2 * n * n + 4;
  for (int d = 1; d <= dmax; ++d) {
    if (euler_phi(d) > n) continue;
    Poly phi = cyclotomic(d);
    if (!divide_exact(p, phi)) continue;
    for (int k = 1; k <= d; ++k) {
      if (std::gcd(k, d) != 1) continue;
      std::complex<double> root =
          std::polar(1.0, 2.0 * std::numbers::pi * k / d);
      best = std::min(best, std::abs(root - theta));
    }
  }
  AngleRationality rat;
  if (best < 1e-9)
    rat = AngleRationality::Rational;
  else if (best > 1e-6)
    rat = AngleRationality::Irrational;
  else
    rat = AngleRationality::Unknown;
  return {theta, psi, rat};
}

}  // namespace ql
