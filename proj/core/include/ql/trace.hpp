#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "ql/plane_slice.hpp"
#include "ql/qp_function.hpp"

namespace ql {

struct Trajectory {
  double level = 0.0;
  std::vector<Eigen::Vector2d> vertices;
  bool closed = false;
  bool hit_boundary = false;

  double length() const;
  double diameter() const;
  Eigen::Vector2d midpoint() const;  // vertex nearest to half arclength
};

enum class TrajectoryKind { Compact, OpenStrong, OpenWeak, Undetermined };

struct AsymptoticFit {
  TrajectoryKind kind = TrajectoryKind::Undetermined;
  Eigen::Vector2d direction = Eigen::Vector2d::Zero();  // unit, for open kinds
  double deviation_sup = 0.0;      // strip half-width (OpenStrong)
  double growth_exponent = 0.0;    // deviation growth estimate (OpenWeak)
};

struct TraceOptions {
  double refine_tol = 1e-8;
  bool critical_check = true;
};

/// All connected components of {phi = c} meeting the square window of the
/// given radius, traced by marching squares with bisection refinement.
/// Throws NearCriticalLevel when the level passes within tolerance of a
/// saddle in a visited cell.
std::vector<Trajectory> trace_level(const QuasiperiodicFunction& qp2, double c,
                                    double window_radius, double grid_step,
                                    const TraceOptions& opts = {});

/// Classification with an explicit re-trace callback used for the
/// stability-under-doubling test (returns the continuation of this
/// trajectory in a window of the given radius, or nullopt).
AsymptoticFit classify_and_fit(
    const Trajectory& traj, double window_radius,
    const std::function<std::optional<Trajectory>(double)>& retrace);

/// Convenience overload: re-traces with trace_level on the same function.
AsymptoticFit classify_and_fit(const QuasiperiodicFunction& qp2,
                               const Trajectory& traj, double window_radius,
                               double grid_step);

struct CompactDiameterReport {
  double sup = 0.0;
  bool stable = false;       // sup unchanged (10%) when the window doubles
  int skipped_offsets = 0;   // offsets that hit NearCriticalLevel
  int compact_count = 0;
};

/// Supremum of diameters of compact trajectories of f restricted to the
/// planes K = a over the given Casimir offsets.
CompactDiameterReport compact_diameter_sup(
    const TrigSeries& f, const Eigen::MatrixXd& casimirs, double c,
    const std::vector<Eigen::VectorXd>& offsets, double window_radius,
    double grid_step);

}  // namespace ql
