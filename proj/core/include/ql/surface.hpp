#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ql/trig_series.hpp"

namespace ql {

struct SurfaceComponent {
  std::vector<int> triangles;   // indices into LevelSurface::triangles
  int chi = 0;
  int genus = 0;
  Eigen::Vector3i homology = Eigen::Vector3i::Zero();  // class in H_2(T^3)
  int rank = 0;  // rank of the image of H_1(component) in H_1(T^3)
};

/// Triangulated level set {f = c} in T^3. Vertices are canonical
/// representatives in [0,1)^3; triangles are glued across the wrap, so edge
/// vectors must be read modulo Z^3 (nearest image). Triangles are oriented
/// with the normal along +grad f.
struct LevelSurface {
  double level = 0.0;
  int resolution = 0;
  std::vector<Eigen::Vector3d> vertices;
  std::vector<Eigen::Vector3i> triangles;
  std::vector<int> tri_component;        // per triangle
  std::vector<SurfaceComponent> components;
};

/// Critical values of f on T^3 (grid scan + Newton polish), sorted.
std::vector<double> critical_values(const TrigSeries& f, int resolution = 24);

/// Watertight periodic isosurface extraction with edge-bisection refinement
/// (vertex residual < 1e-8). Throws CriticalValue when c is within 1e-6 of a
/// critical value of f. Callers holding a precomputed critical-value list
/// (e.g. level sweeps) can pass it to skip the per-call scan.
LevelSurface extract_level_surface(const TrigSeries& f, double c,
                                   int resolution,
                                   const std::vector<double>* known_critical =
                                       nullptr);

/// H_2(T^3) class of a component: signed projected areas per period, summed
/// over nearest-image-lifted triangles and rounded. Throws NonIntegralClass
/// when the rounding residual reaches 1e-3.
Eigen::Vector3i homology_class(const LevelSurface& M,
                               const SurfaceComponent& comp);

/// Displacement b - a read on the torus (nearest image).
inline Eigen::Vector3d torus_diff(const Eigen::Vector3d& b,
                                  const Eigen::Vector3d& a) {
  Eigen::Vector3d d = b - a;
  for (int i = 0; i < 3; ++i) d[i] -= std::round(d[i]);
  return d;
}

}  // namespace ql
