#pragma once

#include <Eigen/Dense>

#include "ql/qp_function.hpp"

namespace ql {

/// Affine two-plane in R^n given as a joint level of independent linear
/// Casimirs, with an orthonormal frame of its direction.
struct PlaneSlice {
  Eigen::MatrixXd casimirs;  // (n-2) x n, rows K_j
  Eigen::VectorXd values;    // a_j
  Eigen::VectorXd e1, e2;    // orthonormal basis of ker(casimirs)
  Eigen::VectorXd base;      // point with casimirs * base = values

  int ambient_dim() const { return static_cast<int>(casimirs.cols()); }

  static PlaneSlice from_casimirs(const Eigen::MatrixXd& K,
                                  const Eigen::VectorXd& a);
  /// n = 3 convenience: the plane B . x = a.
  static PlaneSlice from_normal3(const Eigen::Vector3d& B, double a);
};

/// Restriction of f to the plane, as a two-dimensional quasiperiodic
/// function in the frame coordinates: phi(y) = f(base + y1 e1 + y2 e2).
QuasiperiodicFunction slice_function(const TrigSeries& f,
                                     const PlaneSlice& slice);

}  // namespace ql
