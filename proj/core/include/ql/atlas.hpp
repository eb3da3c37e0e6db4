#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "ql/foliation.hpp"
#include "ql/trig_series.hpp"

namespace ql {

/// Deterministic near-uniform direction samples on S^2 (spherical Fibonacci
/// lattice), in index order.
std::vector<Eigen::Vector3d> fibonacci_sphere(int count);

enum class CPolicy {
  FixedC,               // classify every direction at one level c
  SymmetricZero,        // classify at the symmetric level c = 0
  PerDirectionInterval  // energy interval per direction, verdict at its center
};

enum class SampleStatus { Ok, Nudged, Skipped };

struct ZoneSample {
  Eigen::Vector3d dir = Eigen::Vector3d::Zero();  // direction actually used
  SampleStatus status = SampleStatus::Ok;
  VerdictKind kind = VerdictKind::NoOpenTrajectories;
  Eigen::Vector3i mu = Eigen::Vector3i::Zero();
  double c_minus = 0.0, c_plus = 0.0;  // per-direction interval when computed
  int zone = -1;                       // cluster id; -1 outside every zone
};

struct ZoneMap {
  std::vector<ZoneSample> samples;
  int zone_count = 0;
  std::vector<Eigen::Vector3i> zone_labels;  // one label per zone id
};

struct SweepOptions {
  CPolicy policy = CPolicy::FixedC;
  double c = 0.0;
  int resolution = 16;
  int threads = 1;
  double interval_tol = 1e-2;  // PerDirectionInterval endpoint tolerance
  std::string cache_path;      // empty: no persistence
};

/// Classifies `sample_count` spherical-Fibonacci directions and clusters the
/// StableTCI samples into zones of constant label over the 6-nearest-neighbor
/// graph. Directions within 1e-9 of an integer vector of height <= 10 are
/// nudged by 1e-6 and flagged. Per-sample failures are recorded as Skipped
/// and the sweep continues. With a cache path, finished samples are streamed
/// to a JSON-lines file and an interrupted sweep resumes from it.
ZoneMap sweep(const TrigSeries& f, const SweepOptions& opt, int sample_count);

struct DimensionEstimate {
  std::vector<double> box_sizes;  // dyadic, chart units
  std::vector<long> counts;       // occupied boxes per size, both charts
  double alpha = 0.0;             // fitted slope, clamped to [0, 2]
  double ci_half_width = 0.0;     // two-sigma confidence half width
  bool low_resolution = false;    // fewer than 10^4 target samples
};

/// Dyadic box counting of a direction set over two orthographic hemisphere
/// charts, with a least-squares slope fit. Throws EmptyTarget when `target`
/// is empty.
DimensionEstimate box_dimension(const std::vector<Eigen::Vector3d>& target);

/// Box dimension of the complement of the StableTCI samples of a sweep.
DimensionEstimate box_dimension(const ZoneMap& zones);

/// True iff f(p + p0) = -f(p) identically: verified termwise on the series
/// and cross-checked on 10^3 quasirandom points.
bool symmetric_level_check(const TrigSeries& f, const Eigen::Vector3d& p0);

}  // namespace ql
