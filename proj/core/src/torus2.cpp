#include "ql/torus2.hpp"

#include <cmath>
#include <stdexcept>

#include "ql/contour.hpp"

namespace ql {

std::vector<Torus2Component> torus2_level_classes(const TrigSeries& f, double c,
                                                  int resolution) {
  if (f.dimension() != 2)
    throw std::invalid_argument("torus2_level_classes: need a series on T^2");
  if (resolution < 16)
    throw std::invalid_argument("torus2_level_classes: resolution too small");

  const int n = resolution;
  std::vector<double> values(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      values[static_cast<size_t>(i) * n + j] =
          f.evaluate(Eigen::Vector2d(double(i) / n, double(j) / n));

  auto fe = [&](const Eigen::Vector2d& p) { return f.evaluate(p); };
  auto ge = [&](const Eigen::Vector2d& p) -> Eigen::Vector2d {
    return f.gradient(p);
  };
  auto polys = contour_torus(fe, ge, values, n, c);

  std::vector<Torus2Component> out;
  out.reserve(polys.size());
  for (auto& p : polys) {
    Torus2Component comp;
    Eigen::Vector2d w = p.pts.back() - p.pts.front();
    comp.homology = Eigen::Vector2i(static_cast<int>(std::lround(w[0])),
                                    static_cast<int>(std::lround(w[1])));
    if (std::abs(w[0] - comp.homology[0]) > 1e-6 ||
        std::abs(w[1] - comp.homology[1]) > 1e-6)
      throw std::logic_error("torus2_level_classes: non-integral winding");
    comp.vertices = std::move(p.pts);
    out.push_back(std::move(comp));
  }
  return out;
}

}  // namespace ql
