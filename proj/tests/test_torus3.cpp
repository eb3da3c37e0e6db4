#include <doctest.h>

#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "ql/errors.hpp"
#include "ql/foliation.hpp"
#include "ql/plane_slice.hpp"
#include "ql/surface.hpp"
#include "ql/trace.hpp"
#include "ql/trig_series.hpp"

using namespace ql;

namespace {

const Eigen::Vector3d kGenericB =
    Eigen::Vector3d(1.0, std::sqrt(2.0), std::sqrt(3.0)).normalized();

}  // namespace

TEST_CASE("critical values of the cosine sum") {
  TrigSeries f = TrigSeries::cos_sum(3);
  auto crit = critical_values(f, 16);
  REQUIRE(crit.size() == 4);
  CHECK(crit[0] == doctest::Approx(-3.0).epsilon(1e-9));
  CHECK(crit[1] == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(crit[2] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(crit[3] == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("extract_level_surface: sphere around the maximum") {
  TrigSeries f = TrigSeries::cos_sum(3);
  LevelSurface M = extract_level_surface(f, 2.5, 16);
  REQUIRE(M.components.size() == 1);
  CHECK(M.components[0].chi == 2);
  CHECK(M.components[0].genus == 0);
  CHECK(M.components[0].homology == Eigen::Vector3i(0, 0, 0));
  CHECK(M.components[0].rank == 0);
  // vertex residuals
  for (size_t i = 0; i < M.vertices.size(); i += 7)
    CHECK(std::abs(f.evaluate(M.vertices[i]) - 2.5) < 1e-7);
}

TEST_CASE("extract_level_surface: two flat tori") {
  TrigSeries f(3);
  f.add_cos({0, 0, 1}, 1.0);
  LevelSurface M = extract_level_surface(f, 0.5, 16);
  REQUIRE(M.components.size() == 2);
  Eigen::Vector3i sum = Eigen::Vector3i::Zero();
  for (const auto& comp : M.components) {
    CHECK(comp.chi == 0);
    CHECK(comp.genus == 1);
    CHECK(comp.homology.cwiseAbs() == Eigen::Vector3i(0, 0, 1));
    CHECK(comp.rank == 2);
    sum += comp.homology;
  }
  CHECK(sum == Eigen::Vector3i(0, 0, 0));
}

TEST_CASE("extract_level_surface: genus-3 central level of the cosine sum") {
  TrigSeries f = TrigSeries::cos_sum(3);
  LevelSurface M = extract_level_surface(f, 0.001, 24);
  REQUIRE(M.components.size() == 1);
  CHECK(M.components[0].genus == 3);
  CHECK(M.components[0].homology == Eigen::Vector3i(0, 0, 0));
}

TEST_CASE("extract_level_surface rejects near-critical levels") {
  TrigSeries f = TrigSeries::cos_sum(3);
  try {
    (void)extract_level_surface(f, 1.0 + 2e-7, 16);
    FAIL("expected CriticalValue");
  } catch (const CriticalValue& e) {
    CHECK(e.nearest_critical_value == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("homology classes sum to zero on a full level surface") {
  TrigSeries f = TrigSeries::cos_sum(3);
  LevelSurface M = extract_level_surface(f, 0.3, 20);
  Eigen::Vector3i sum = Eigen::Vector3i::Zero();
  for (const auto& comp : M.components) sum += homology_class(M, comp);
  CHECK(sum == Eigen::Vector3i(0, 0, 0));
}

TEST_CASE("foliation_singularities: sphere has two centers") {
  TrigSeries f = TrigSeries::cos_sum(3);
  LevelSurface M = extract_level_surface(f, 2.5, 16);
  auto sing = foliation_singularities(f, M, kGenericB);
  REQUIRE(sing.points.size() == 2);
  for (const auto& s : sing.points) CHECK(!s.is_saddle);
  CHECK(sing.connections.empty());
}

TEST_CASE("Poincare-Hopf across an ensemble of levels and directions") {
  TrigSeries f = TrigSeries::cos_sum(3);
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-1, 1);
  for (double c : {0.2, 0.6, 1.4, 2.2, -0.4}) {
    LevelSurface M = extract_level_surface(f, c, 16);
    for (int trial = 0; trial < 2; ++trial) {
      Eigen::Vector3d B(1.0 + 0.2 * u(rng), std::sqrt(2.0) + 0.2 * u(rng),
                        std::sqrt(3.0) + 0.2 * u(rng));
      B.normalize();
      auto sing = foliation_singularities(f, M, B);
      std::map<int, int> chi_sing;  // component -> centers - saddles
      for (const auto& s : sing.points)
        chi_sing[s.component] += s.is_saddle ? -1 : 1;
      for (size_t ci = 0; ci < M.components.size(); ++ci)
        CHECK(chi_sing[static_cast<int>(ci)] == M.components[ci].chi);
    }
  }
}

TEST_CASE("singularities satisfy the defining equations") {
  TrigSeries f = TrigSeries::cos_sum(3);
  LevelSurface M = extract_level_surface(f, 0.2, 16);
  auto sing = foliation_singularities(f, M, kGenericB);
  CHECK(!sing.points.empty());
  for (const auto& s : sing.points) {
    CHECK(std::abs(f.evaluate(s.point) - 0.2) < 1e-9);
    Eigen::Vector3d g = f.gradient(s.point);
    // angle between grad f and B below 1e-8
    CHECK(g.cross(kGenericB).norm() / (g.norm() * kGenericB.norm()) < 1e-8);
  }
  // saddle-connection cycles live in single planes B = const
  for (const auto& cnx : sing.connections)
    CHECK(cnx.height_spread < 1e-4);
}

TEST_CASE("decompose: flat tori are single carriers with class (0,0,1)") {
  TrigSeries f(3);
  f.add_cos({0, 0, 1}, 1.0);
  LevelSurface M = extract_level_surface(f, 0.4, 16);
  auto sing = foliation_singularities(f, M, kGenericB);
  CHECK(sing.points.empty());
  auto dec = decompose(f, M, kGenericB, sing);
  CHECK(dec.cylinders.empty());
  REQUIRE(dec.carriers.size() == 2);
  for (const auto& car : dec.carriers) {
    CHECK(car.boundary_loops == 0);
    CHECK(car.genus == 1);
    CHECK(car.cls.cwiseAbs() == Eigen::Vector3i(0, 0, 1));
  }
}

TEST_CASE("decompose: sphere is all cylinders, no carriers") {
  TrigSeries f = TrigSeries::cos_sum(3);
  LevelSurface M = extract_level_surface(f, 2.5, 16);
  auto sing = foliation_singularities(f, M, kGenericB);
  auto dec = decompose(f, M, kGenericB, sing);
  CHECK(dec.carriers.empty());
  CHECK(!dec.cylinders.empty());
}

TEST_CASE("decompose: cos-sum near the (1,0,0) zone") {
  TrigSeries f = TrigSeries::cos_sum(3);
  Eigen::Vector3d B(1.0, 0.1 * std::sqrt(2.0), 0.1 * std::sqrt(3.0));
  B.normalize();
  LevelSurface M = extract_level_surface(f, 0.0, 24);
  auto sing = foliation_singularities(f, M, B);
  auto dec = decompose(f, M, B, sing);
  REQUIRE(!dec.carriers.empty());
  CHECK(dec.carriers.size() % 2 == 0);
  for (const auto& car : dec.carriers) {
    CHECK(car.genus == 1);
    CHECK(car.cls.cwiseAbs() == Eigen::Vector3i(1, 0, 0));
  }
}

TEST_CASE("verdict: stable TCI with eta along mu x B") {
  TrigSeries f = TrigSeries::cos_sum(3);
  Eigen::Vector3d B(1.0, 0.1 * std::sqrt(2.0), 0.1 * std::sqrt(3.0));
  B.normalize();
  Verdict v = verdict(f, B, 0.0, 24);
  REQUIRE(v.kind == VerdictKind::StableTCI);
  CHECK(v.mu == Eigen::Vector3i(1, 0, 0));
  CHECK(v.torus_count % 2 == 0);
  Eigen::Vector3d eta_expect = v.mu.cast<double>().cross(B).normalized();
  CHECK(std::abs(std::abs(v.eta.dot(eta_expect)) - 1.0) < 1e-12);
  // gcd of the label is 1
  int g = std::gcd(std::gcd(std::abs(v.mu[0]), std::abs(v.mu[1])),
                   std::abs(v.mu[2]));
  CHECK(g == 1);
}

TEST_CASE("verdict: level near the maximum has no open trajectories") {
  TrigSeries f = TrigSeries::cos_sum(3);
  Verdict v = verdict(f, kGenericB, 2.5, 16);
  CHECK(v.kind == VerdictKind::NoOpenTrajectories);
}

TEST_CASE("surface trajectory matches the plane-traced level line") {
  TrigSeries f = TrigSeries::cos_sum(3);
  Eigen::Vector3d B(1.0, 0.01 * std::sqrt(2.0), 0.01 * std::sqrt(3.0));
  B.normalize();
  const double c = 0.1;
  // seed on the surface
  Eigen::Vector3d seed(0.25, 0.1, 0.2);
  {
    // put the seed on {f = c} by moving along the gradient
    for (int it = 0; it < 50; ++it) {
      double r = f.evaluate(seed) - c;
      if (std::abs(r) < 1e-12) break;
      Eigen::Vector3d g = f.gradient(seed);
      seed -= r * g / g.squaredNorm();
    }
  }
  auto path = trace_surface_trajectory(f, B, seed, c, 20.0, 0.005);
  REQUIRE(path.size() > 100);
  // the path stays on the surface and in the plane
  for (size_t i = 0; i < path.size(); i += 17) {
    CHECK(std::abs(f.evaluate(path[i]) - c) < 1e-8);
    CHECK(std::abs(B.dot(path[i]) - B.dot(path.front())) < 1e-8);
  }
  // plane trace through the same seed
  PlaneSlice slice = PlaneSlice::from_normal3(B, B.dot(seed));
  QuasiperiodicFunction qp2 = slice_function(f, slice);
  // seed in plane coordinates
  Eigen::Vector2d y0(slice.e1.dot(seed - slice.base),
                     slice.e2.dot(seed - slice.base));
  auto trajs = trace_level(qp2, c, 14.0, 1.0 / 32);
  // Hausdorff distance from the integrated path to the nearest traced line
  double worst = 0.0;
  for (size_t i = 0; i < path.size(); i += 3) {
    Eigen::Vector2d p(slice.e1.dot(path[i] - slice.base),
                      slice.e2.dot(path[i] - slice.base));
    if (p.lpNorm<Eigen::Infinity>() > 12.0) continue;  // outside the window
    double best = 1e18;
    for (const auto& t : trajs)
      for (size_t j = 0; j + 1 < t.vertices.size(); ++j) {
        Eigen::Vector2d a = t.vertices[j], b = t.vertices[j + 1];
        Eigen::Vector2d d = b - a;
        double s = d.squaredNorm() > 0
                       ? std::clamp((p - a).dot(d) / d.squaredNorm(), 0.0, 1.0)
                       : 0.0;
        best = std::min(best, (p - (a + s * d)).norm());
      }
    worst = std::max(worst, best);
  }
  CHECK(worst < 1e-3);
}

TEST_CASE("energy_interval: symmetric function gives a symmetric interval") {
  TrigSeries f = TrigSeries::cos_sum(3);
  Eigen::Vector3d B(1.0, 0.2 * std::sqrt(2.0), 0.2 * std::sqrt(3.0));
  B.normalize();
  EnergyInterval U = energy_interval(f, B, -2.0, 2.0, 1e-3, 16);
  REQUIRE(U.kind != EnergyInterval::Empty);
  CHECK(U.c_minus < 0);
  CHECK(U.c_plus > 0);
  CHECK(std::abs(U.c_minus + U.c_plus) < 2e-3);
}

TEST_CASE("energy_interval: single-frequency carriers exist at every level") {
  TrigSeries f(3);
  f.add_cos({0, 0, 1}, 1.0);
  EnergyInterval U = energy_interval(f, kGenericB, -1.5, 1.5, 1e-2, 14);
  REQUIRE(U.kind == EnergyInterval::Interval);
  CHECK(U.c_minus == doctest::Approx(-1.0).epsilon(0.05));
  CHECK(U.c_plus == doctest::Approx(1.0).epsilon(0.05));
}
