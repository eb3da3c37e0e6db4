#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace ql {

struct Polyline {
  std::vector<Eigen::Vector2d> pts;
  bool closed = false;
  bool hit_boundary = false;
};

/// Marching squares over a regular planar grid. `values` holds count*count
/// node values (row-major, i = x index slowest). Crossing points are refined
/// onto the level set by bisection of `f` along grid edges. Cell ambiguity is
/// resolved by the sign of the cell-center value.
/// When `critical_check` is set, throws NearCriticalLevel if a visited cell
/// carries a sampled point with |f - level| < 1e-6 and |grad| < 1e-6.
std::vector<Polyline> contour_planar(
    const std::function<double(const Eigen::Vector2d&)>& f,
    const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& grad,
    const std::vector<double>& values, const Eigen::Vector2d& origin, double h,
    int count, double level, double refine_tol = 1e-8,
    bool critical_check = true);

/// Same algorithm on the unit torus: nodes (i/n, j/n) with wrap-around cells.
/// All resulting polylines are closed on the torus; `pts` holds a lifted
/// (unwrapped) traversal so that pts.back() - pts.front() is the integer
/// homology class.
std::vector<Polyline> contour_torus(
    const std::function<double(const Eigen::Vector2d&)>& f,
    const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& grad,
    const std::vector<double>& values, int n, double level,
    double refine_tol = 1e-8, bool critical_check = true);

}  // namespace ql
