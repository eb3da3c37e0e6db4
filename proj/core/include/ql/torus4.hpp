#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ql/foliation.hpp"
#include "ql/trig_series.hpp"

namespace ql {

/// Pair of covectors on T^4: integral primitive ell1 and real ell2 whose
/// restriction to the integral 3-plane {ell1 = 0} has irrationality degree 3.
/// U is the unimodular change of coordinates x = U y with ell1 . x = y_0, so
/// slices are read off the normalized coordinates directly.
struct DirectionPair {
  Eigen::Vector4i ell1;
  Eigen::Vector4d ell2;
  Eigen::Matrix4i U;       // x = U y; ell1^T U = (1,0,0,0)
  Eigen::Matrix4i U_inv;   // integer inverse (U is unimodular)
  Eigen::Vector4d ell2_y;  // U^T ell2: ell2 in normalized coordinates

  /// ell2 restricted to the slice torus {y_0 = t}.
  Eigen::Vector3d slice_covector() const { return ell2_y.tail<3>(); }
};

/// Validates primitivity and the certified irrationality degree (= 3 at the
/// given denominator bound) and computes the normalization. Throws
/// std::invalid_argument on a non-primitive ell1 or wrong degree.
DirectionPair make_direction_pair(const Eigen::Vector4i& ell1,
                                  const Eigen::Vector4d& ell2,
                                  long long denominator_bound = 1000000);

/// f in normalized coordinates, restricted to the slice torus {y_0 = t}:
/// a three-quasiperiod series with t-dependent coefficients.
TrigSeries slice_series(const TrigSeries& f4, const DirectionPair& dp,
                        double t);

enum class CaseKind { Case1, Case2, Degenerate };

struct SliceEntry {
  double t = 0.0;
  bool failed = false;  // per-t error; recorded, profile continues
  EnergyInterval interval;
  VerdictKind kind = VerdictKind::NoOpenTrajectories;
  Eigen::Vector3i mu = Eigen::Vector3i::Zero();
};

struct SliceProfile {
  std::vector<SliceEntry> entries;
  CaseKind case_kind = CaseKind::Degenerate;
  double min_c_plus = 0.0;   // over slices with a nonempty interval
  double max_c_minus = 0.0;
  bool any_empty = false;    // some slice carries no open trajectories
  double max_jump = 0.0;     // largest c_{t+-} jump between adjacent slices
  double tol = 0.0;
};

/// Energy interval and verdict per t sample; Case1 iff min_t c_{t+} <
/// max_t c_{t-} (or some slice is Empty while others are not), Case2 iff
/// min_t c_{t+} > max_t c_{t-}, Degenerate when the margin is within tol.
SliceProfile slice_profile(const TrigSeries& f4, const DirectionPair& dp,
                           int t_samples, double tol, int resolution = 14,
                           int scan_samples = 21);

/// The collapsed function fbar on one affine plane {ell1 = a, ell2 = b}:
/// every compact level line found in the scan is filled with its own level,
/// the rest keeps f. Values on the regular grid origin + (i h, j h),
/// row-major with j fastest.
struct BarField {
  Eigen::Vector2d origin = Eigen::Vector2d::Zero();
  double h = 0.0;
  int count = 0;
  std::vector<double> f_values;
  std::vector<double> bar_values;
  std::vector<double> pseudotorus_levels;  // compact-region birth/death scan levels
  int compact_regions = 0;
  double max_jump = 0.0;  // largest bar-value step between grid neighbors
};

/// Region decisions are taken from a doubled window and cross-checked
/// against the single window on the inner half; a flip throws
/// UnstableComponentClassification.
BarField bar_field(const TrigSeries& f4, const DirectionPair& dp,
                   const Eigen::Vector2d& ab, const std::vector<double>& c_scan,
                   double window_radius, double grid_step = 1.0 / 16);

struct Separator3Manifold {
  enum Kind { TSlice, BarLevel } kind = TSlice;
  double t = 0.0;      // TSlice: {ell1 . x = t mod 1}
  double level = 0.0;  // BarLevel: {fbar = level}
  Eigen::Vector4i cls = Eigen::Vector4i::Zero();  // class in H_3(T^4)
};

enum class Position { EssentiallyBelow, EssentiallyAbove, Neither };

/// Samples affine planes and tests disjointness of the plane sections of N
/// from the unbounded components of {f >= c} (below) and {f <= c} (above),
/// each at a doubling-stable window. Returns a position only on a unanimous
/// vote. Throws UnstableComponentClassification when a boundedness decision
/// keeps flipping under window doubling.
Position essentially_positioned(const Separator3Manifold& N,
                                const TrigSeries& f4, const DirectionPair& dp,
                                double c, int sample_count,
                                double window_radius = 6.0,
                                unsigned seed = 2026);

struct SeparatorReport {
  Separator3Manifold N;
  Position position = Position::Neither;
  int samples = 0;               // sampled (a, b) planes in the verification
  double max_deviation = 0.0;    // strip half-width bound C over the samples
  double max_compact_diameter = 0.0;
};

/// Case 1: a coordinate torus T^3_t with t outside the energy interval of
/// the queried level, class +-ell1. Case 2: an fbar-level preimage N_{c1}
/// with c1 strictly inside the common interval on the correct side of c;
/// class from the common slice label mu and the t circle. Throws
/// CaseDegenerate on a Degenerate profile and NoNontrivialBaseCircle when
/// the slice labels do not agree.
SeparatorReport construct_separator(const TrigSeries& f4,
                                    const DirectionPair& dp, double c,
                                    const SliceProfile& profile,
                                    int sample_count = 8,
                                    double window_radius = 6.0,
                                    unsigned seed = 2026);

struct Theorem1Report {
  bool passed = false;
  int samples = 0;
  int open_count = 0;
  int compact_count = 0;
  Eigen::Vector2d direction = Eigen::Vector2d::Zero();  // common direction
  double max_angle = 0.0;  // worst direction spread, radians
  double C_est = 0.0;      // sup strip half-width over samples
  double D_est = 0.0;      // sup compact diameter over samples
  bool estimates_stable = false;  // within 10% when sample count doubles
  Eigen::Vector2d violation_ab = Eigen::Vector2d::Zero();
  std::string reason;  // empty when passed
};

/// Traces every level-c trajectory on sample_count random planes: all open
/// trajectories must be strongly asymptotic to one common direction (1e-2
/// rad) with bounded deviation; C and D estimates must be stable under
/// doubling the sample count. A failure is returned (not thrown) with the
/// offending plane attached; ViolationFound is reserved for callers that
/// want to escalate.
Theorem1Report verify_theorem1(const TrigSeries& f4, const DirectionPair& dp,
                               double c, int sample_count,
                               double window_radius, unsigned seed = 2026);

}  // namespace ql
