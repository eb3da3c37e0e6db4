#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "ql/atlas.hpp"
#include "ql/errors.hpp"

using namespace ql;

namespace {

bool samples_equal(const ZoneSample& a, const ZoneSample& b) {
  return a.dir == b.dir && a.status == b.status && a.kind == b.kind &&
         a.mu == b.mu && a.c_minus == b.c_minus && a.c_plus == b.c_plus &&
         a.zone == b.zone;
}

}  // namespace

TEST_CASE("fibonacci_sphere: deterministic near-uniform unit directions") {
  auto d1 = fibonacci_sphere(500);
  auto d2 = fibonacci_sphere(500);
  REQUIRE(d1.size() == 500);
  for (size_t i = 0; i < d1.size(); ++i) {
    CHECK(std::abs(d1[i].norm() - 1.0) < 1e-14);
    CHECK(d1[i] == d2[i]);  // bitwise deterministic
  }
  // near-uniform: nearest-neighbor gap bounded below by ~c/sqrt(n)
  double min_gap = 10.0;
  for (size_t i = 0; i < d1.size(); ++i)
    for (size_t j = i + 1; j < d1.size(); ++j)
      min_gap = std::min(min_gap, (d1[i] - d1[j]).norm());
  CHECK(min_gap > 0.5 / std::sqrt(500.0));
}

TEST_CASE("symmetric_level_check: antisymmetry about the half-period point") {
  Eigen::Vector3d p0(0.5, 0.5, 0.5);
  CHECK(symmetric_level_check(TrigSeries::cos_sum(3), p0));
  CHECK(symmetric_level_check(TrigSeries::sin_sum(3), p0));

  // a constant offset breaks the antisymmetry
  TrigSeries shifted = TrigSeries::cos_sum(3);
  shifted.add_cos({0, 0, 0}, 0.1);
  CHECK(!symmetric_level_check(shifted, p0));

  // wrong shift point
  CHECK(!symmetric_level_check(TrigSeries::cos_sum(3),
                               Eigen::Vector3d(1.0 / 3, 0.5, 0.5)));
}

TEST_CASE("box_dimension: empty target throws") {
  CHECK_THROWS_AS(box_dimension(std::vector<Eigen::Vector3d>{}), EmptyTarget);
}

TEST_CASE("box_dimension: full sphere scores near two") {
  auto est = box_dimension(fibonacci_sphere(20000));
  CHECK(!est.low_resolution);
  CHECK(est.alpha >= 1.9);
  CHECK(est.alpha <= 2.0);
  for (size_t i = 1; i < est.counts.size(); ++i)
    CHECK(est.counts[i] >= est.counts[i - 1]);  // monotone box counts
}

TEST_CASE("box_dimension: great-circle band scores near one") {
  // tilted great circle (axis-aligned ones sit on chart gridlines) with a
  // deterministic 1e-3 transverse wiggle
  Eigen::Vector3d n = Eigen::Vector3d(1, 2, 3).normalized();
  Eigen::Vector3d a = n.unitOrthogonal(), b = n.cross(a);
  std::vector<Eigen::Vector3d> circle;
  for (int i = 0; i < 5000; ++i) {
    double t = 2.0 * M_PI * i / 5000.0;
    circle.push_back(
        (std::cos(t) * a + std::sin(t) * b + 1e-3 * std::sin(7 * t) * n)
            .normalized());
  }
  auto est = box_dimension(circle);
  CHECK(est.low_resolution);
  CHECK(est.alpha >= 0.85);
  CHECK(est.alpha <= 1.15);
}

TEST_CASE("box_dimension: zone-map overload targets the non-TCI complement") {
  auto dirs = fibonacci_sphere(600);
  ZoneMap zones;
  std::vector<Eigen::Vector3d> rest;
  for (int i = 0; i < 600; ++i) {
    ZoneSample s;
    s.dir = dirs[i];
    s.kind = i < 400 ? VerdictKind::StableTCI : VerdictKind::Chaotic;
    if (i >= 400) rest.push_back(dirs[i]);
    zones.samples.push_back(s);
  }
  auto a = box_dimension(zones);
  auto b = box_dimension(rest);
  CHECK(a.alpha == b.alpha);
  CHECK(a.counts == b.counts);
}

TEST_CASE("sweep: rejects undersized sample counts") {
  SweepOptions opt;
  CHECK_THROWS_AS(sweep(TrigSeries::cos_sum(3), opt, 50),
                  std::invalid_argument);
}

TEST_CASE("sweep: single-frequency series gives one global zone") {
  TrigSeries f(3);
  f.add_cos({0, 0, 1}, 1.0);
  SweepOptions opt;
  opt.policy = CPolicy::FixedC;
  opt.c = 0.25;
  opt.resolution = 12;
  ZoneMap zones = sweep(f, opt, 120);
  REQUIRE(zones.samples.size() == 120);
  int stable = 0;
  for (const auto& s : zones.samples) {
    if (s.kind != VerdictKind::StableTCI) continue;
    ++stable;
    CHECK(s.mu == Eigen::Vector3i(0, 0, 1));
    CHECK(s.zone == 0);
  }
  CHECK(stable >= 110);  // every direction away from degeneracies resolves
  CHECK(zones.zone_count == 1);
  CHECK(zones.zone_labels[0] == Eigen::Vector3i(0, 0, 1));
}

TEST_CASE("sweep: thread count does not change any record") {
  TrigSeries f(3);
  f.add_cos({0, 0, 1}, 1.0);
  SweepOptions opt;
  opt.c = 0.25;
  opt.resolution = 12;
  opt.threads = 1;
  ZoneMap a = sweep(f, opt, 100);
  opt.threads = 3;
  ZoneMap b = sweep(f, opt, 100);
  REQUIRE(a.samples.size() == b.samples.size());
  for (size_t i = 0; i < a.samples.size(); ++i)
    CHECK(samples_equal(a.samples[i], b.samples[i]));
  CHECK(a.zone_count == b.zone_count);
}

TEST_CASE("sweep: interrupted cache resumes to the uninterrupted result") {
  TrigSeries f(3);
  f.add_cos({0, 0, 1}, 1.0);
  SweepOptions opt;
  opt.c = 0.25;
  opt.resolution = 12;
  ZoneMap ref = sweep(f, opt, 100);

  const std::string path = "test_atlas_cache.jsonl";
  std::remove(path.c_str());
  opt.cache_path = path;
  ZoneMap full = sweep(f, opt, 100);
  for (size_t i = 0; i < ref.samples.size(); ++i)
    CHECK(samples_equal(ref.samples[i], full.samples[i]));

  // keep only the first half of the cache, plus one torn line
  std::vector<std::string> lines;
  {
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
  }
  REQUIRE(lines.size() == 100);
  {
    std::ofstream out(path, std::ios::trunc);
    for (size_t i = 0; i < 50; ++i) out << lines[i] << "\n";
    out << lines[50].substr(0, lines[50].size() / 2);  // interrupted write
  }
  ZoneMap resumed = sweep(f, opt, 100);
  for (size_t i = 0; i < ref.samples.size(); ++i)
    CHECK(samples_equal(ref.samples[i], resumed.samples[i]));
  std::remove(path.c_str());
}

TEST_CASE("zone labels are rigid under 1e-5 direction perturbations") {
  TrigSeries f = TrigSeries::cos_sum(3);
  Eigen::Vector3d B(1.0, 0.2 * std::sqrt(2.0), 0.2 * std::sqrt(3.0));
  B.normalize();
  Verdict v0 = verdict(f, B, 0.0, 16);
  REQUIRE(v0.kind == VerdictKind::StableTCI);
  for (int k = 0; k < 3; ++k) {
    Eigen::Vector3d t = B.unitOrthogonal();
    Eigen::Vector3d Bp =
        (B + 1e-5 * std::cos(k * 2.1) * t + 1e-5 * std::sin(k * 2.1) * B.cross(t))
            .normalized();
    Verdict v = verdict(f, Bp, 0.0, 16);
    REQUIRE(v.kind == VerdictKind::StableTCI);
    CHECK(v.mu == v0.mu);  // exact integer equality
  }
}

TEST_CASE("sweep: cos-sum symmetric level finds the coordinate-axis zones") {
  TrigSeries f = TrigSeries::cos_sum(3);
  SweepOptions opt;
  opt.policy = CPolicy::SymmetricZero;
  opt.resolution = 16;
  ZoneMap zones = sweep(f, opt, 150);
  std::set<std::array<int, 3>> labels;
  for (const auto& s : zones.samples)
    if (s.kind == VerdictKind::StableTCI)
      labels.insert({s.mu[0], s.mu[1], s.mu[2]});
  CHECK(labels.size() >= 3);
  CHECK(labels.count({1, 0, 0}) == 1);
  CHECK(labels.count({0, 1, 0}) == 1);
  CHECK(labels.count({0, 0, 1}) == 1);
  // the e1 zone clusters around the x axis: some member within 0.45 rad
  double best = 10.0;
  for (const auto& s : zones.samples)
    if (s.kind == VerdictKind::StableTCI && s.mu == Eigen::Vector3i(1, 0, 0))
      best = std::min({best, std::acos(std::abs(s.dir[0]))});
  CHECK(best < 0.45);
}
