#pragma once

#include <Eigen/Dense>
#include <vector>

namespace ql {

/// Convex polytope in R^d as an intersection of halfspaces n.x <= c, with an
/// explicit bounding box for enumeration.
struct WindowPolytope {
  struct Halfspace {
    Eigen::VectorXd normal;
    double offset;
  };
  std::vector<Halfspace> faces;
  Eigen::VectorXd bbox_lo, bbox_hi;

  static WindowPolytope interval(double lo, double hi);
  static WindowPolytope box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);
  static WindowPolytope empty(int dim);

  /// Signed margin to the boundary: > 0 strictly inside, < 0 outside.
  double margin(const Eigen::VectorXd& q) const;
};

struct PointSet {
  std::vector<Eigen::VectorXd> points;
  double rho1 = 0.0;  // covering radius estimate
  double rho2 = 0.0;  // packing radius (min pairwise distance)
};

/// Cut-and-project set p(Gamma intersect D_q): lattice points of
/// lattice_basis * Z^n whose last (n-k) coordinates lie in the window,
/// projected to the first k coordinates, restricted to |p|_inf <=
/// physical_radius. Throws WindowBoundaryHit when a lattice point falls
/// within the 1e-9 guard band of the window boundary.
PointSet cut_and_project(const Eigen::MatrixXd& lattice_basis, int k,
                         const WindowPolytope& window,
                         double physical_radius = 50.0);

}  // namespace ql
