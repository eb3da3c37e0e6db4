#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ql/trig_series.hpp"

namespace ql {

struct Torus2Component {
  Eigen::Vector2i homology;                // winding numbers; (0,0) if compact
  std::vector<Eigen::Vector2d> vertices;   // lifted traversal, first == last
};

/// Connected components of {f = c} on T^2 with their H_1 classes.
/// Throws NearCriticalLevel when c is within tolerance of a saddle value.
std::vector<Torus2Component> torus2_level_classes(const TrigSeries& f, double c,
                                                  int resolution = 192);

}  // namespace ql
