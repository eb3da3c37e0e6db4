#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ql/surface.hpp"
#include "ql/trig_series.hpp"

namespace ql {

struct FoliationSingularity {
  Eigen::Vector3d point;   // canonical representative in [0,1)^3
  bool is_saddle = false;  // otherwise a center
  double height = 0.0;     // B . point (representative-dependent)
  int component = -1;      // surface component index
};

struct SaddleConnection {
  int saddle = -1;                       // index into singularities
  std::vector<Eigen::Vector3d> cycle;    // lifted homoclinic loop in R^3
  double height_spread = 0.0;            // max |B.x - B.saddle| along the loop
};

struct FoliationSingularities {
  std::vector<FoliationSingularity> points;
  std::vector<SaddleConnection> connections;
  std::vector<int> nonreturning;   // saddles with a separatrix that never closed
  bool saddle_to_saddle = false;   // separatrix reached a different saddle
};

/// Zeros of the foliation form B.dp restricted to M (points with grad f
/// parallel to B), Morse-classified, plus homoclinic saddle-connection
/// cycles traced along the surface flow. Throws DegenerateSingularity when a
/// restricted Hessian determinant falls below 1e-9.
FoliationSingularities foliation_singularities(const TrigSeries& f,
                                               const LevelSurface& M,
                                               const Eigen::Vector3d& B);

/// Integral curve of grad f x B from `seed` (assumed near {f = c}), lifted to
/// R^3, with projection back onto {f = c, B.x = B.seed} after every step.
std::vector<Eigen::Vector3d> trace_surface_trajectory(
    const TrigSeries& f, const Eigen::Vector3d& B, const Eigen::Vector3d& seed,
    double c, double max_length, double step = 0.005);

struct CarrierClosure {
  std::vector<int> triangles;   // the carrier subsurface L_l
  int chi_carrier = 0;          // chi(L_l)
  int boundary_loops = 0;       // number of glued disks
  int genus = 0;                // genus of N_l
  Eigen::Vector3i cls = Eigen::Vector3i::Zero();  // [N_l] in H_2(T^3)
};

struct FoliationDecomposition {
  std::vector<std::vector<int>> cylinders;  // triangle sets of closed-leaf parts
  std::vector<CarrierClosure> carriers;
};

/// Splits M along the saddle-connection cycles into cylinders of closed
/// leaves and carriers of open ones; closes each carrier with planar disks
/// and reports genus and homology class per closure. Throws
/// GenericityViolated on a saddle-to-saddle connection.
FoliationDecomposition decompose(const TrigSeries& f, const LevelSurface& M,
                                 const Eigen::Vector3d& B,
                                 const FoliationSingularities& sing);

enum class VerdictKind { StableTCI, Chaotic, NoOpenTrajectories };

struct Verdict {
  VerdictKind kind = VerdictKind::NoOpenTrajectories;
  Eigen::Vector3i mu = Eigen::Vector3i::Zero();  // primitive label, sign-fixed
  int torus_count = 0;
  Eigen::Vector3d eta = Eigen::Vector3d::Zero();  // common direction, unit
};

/// Full pipeline at one (B, c): StableTCI(mu, eta ~ mu x B) when every
/// carrier closure has genus one and a common class; Chaotic when some genus
/// exceeds one (re-confirmed at double resolution); NoOpenTrajectories when
/// there are no carriers.
Verdict verdict(const TrigSeries& f, const Eigen::Vector3d& B, double c,
                int resolution = 16);

/// Same classification against a pre-extracted surface, so sweeps over many
/// directions at a fixed level reuse one mesh. When `confirm` is non-null a
/// Chaotic answer is re-derived on it (normally a finer mesh of the same
/// level) before being reported.
Verdict verdict_on_surface(const TrigSeries& f, const LevelSurface& M,
                           const Eigen::Vector3d& B,
                           const LevelSurface* confirm = nullptr);

struct EnergyInterval {
  enum Kind { Interval, Point, Empty } kind = Empty;
  double c_minus = 0.0, c_plus = 0.0;
};

/// The connected set of levels carrying open trajectories, endpoints refined
/// to `tol` by bisection of the carriers-nonempty predicate. Throws
/// NonConnectedInterval when the sampled predicate splits into separated
/// blocks.
EnergyInterval energy_interval(const TrigSeries& f, const Eigen::Vector3d& B,
                               double c_lo, double c_hi, double tol,
                               int resolution = 14, int scan_samples = 33);

}  // namespace ql
