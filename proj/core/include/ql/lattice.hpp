#pragma once

#include <Eigen/Dense>
#include <vector>

namespace ql::lattice {

/// Integer relations m with m . ell = 0 (to working precision) and
/// |m|_inf <= Q, found by LLL reduction of the standard relation lattice.
/// The returned rows are independent. Throws AmbiguousAtBound when a
/// relation is found with coefficients within a factor 10 of Q.
std::vector<Eigen::VectorXi> integer_relations(const Eigen::VectorXd& ell,
                                               long long denominator_bound);

/// Rank over Z of the components of ell, certified up to the given
/// denominator bound. Result is in [1, n] for nonzero ell.
int irrationality_degree(const Eigen::VectorXd& ell,
                         long long denominator_bound = 1000000);

/// Unimodular integer matrix U with ell * U = (g, 0, ..., 0), g = gcd > 0.
/// In the new coordinates x = U x' the covector ell becomes g * x'_0.
Eigen::MatrixXi unimodular_column_reduction(const Eigen::VectorXi& ell);

/// LLL reduction of the rows of an integer matrix (delta = 0.75).
Eigen::MatrixXi lll_reduce(const Eigen::MatrixXi& basis);

}  // namespace ql::lattice
