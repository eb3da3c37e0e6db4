#pragma once

#include <complex>
#include <vector>

namespace ql {

enum class AngleRationality { Rational, Irrational, Unknown };

struct UnimodularRootResult {
  std::complex<double> theta;      // |theta| = 1 by construction
  double psi;                      // theta = exp(i psi), psi in [0, pi]
  AngleRationality psi_over_2pi;
};

/// Root on the unit circle of the reciprocal polynomial
/// P(z) = z^n + a_1 z^{n-1} + ... + a_{n-1} z + 1 with a_s = a_{n-s},
/// together with a rationality test of psi / 2pi by cyclotomic-factor
/// detection. Returns the root of smallest positive angle.
/// Throws NoUnimodularRoot when P has no root on the circle.
UnimodularRootResult reciprocal_unimodular_root(const std::vector<long long>& a);

/// Cyclotomic polynomial Phi_d, coefficients from constant term up.
std::vector<long long> cyclotomic(int d);

}  // namespace ql
