#include "ql/atlas.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <random>
#include <set>
#include <thread>

#include <nlohmann/json.hpp>

#include "ql/errors.hpp"

namespace ql {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

using json = nlohmann::json;

const char* status_name(SampleStatus s) {
  switch (s) {
    case SampleStatus::Ok: return "ok";
    case SampleStatus::Nudged: return "nudged";
    case SampleStatus::Skipped: return "skipped";
  }
  return "?";
}

const char* verdict_name(VerdictKind k) {
  switch (k) {
    case VerdictKind::StableTCI: return "stable";
    case VerdictKind::Chaotic: return "chaotic";
    case VerdictKind::NoOpenTrajectories: return "none";
  }
  return "?";
}

bool parse_status(const std::string& s, SampleStatus& out) {
  if (s == "ok") out = SampleStatus::Ok;
  else if (s == "nudged") out = SampleStatus::Nudged;
  else if (s == "skipped") out = SampleStatus::Skipped;
  else return false;
  return true;
}

bool parse_verdict(const std::string& s, VerdictKind& out) {
  if (s == "stable") out = VerdictKind::StableTCI;
  else if (s == "chaotic") out = VerdictKind::Chaotic;
  else if (s == "none") out = VerdictKind::NoOpenTrajectories;
  else return false;
  return true;
}

json sample_to_json(int index, const ZoneSample& s) {
  return json{{"index", index},
              {"dir", {s.dir[0], s.dir[1], s.dir[2]}},
              {"status", status_name(s.status)},
              {"verdict", verdict_name(s.kind)},
              {"mu", {s.mu[0], s.mu[1], s.mu[2]}},
              {"c_minus", s.c_minus},
              {"c_plus", s.c_plus}};
}

bool sample_from_json(const json& j, int& index, ZoneSample& s) {
  if (!j.is_object()) return false;
  try {
    index = j.at("index").get<int>();
    auto d = j.at("dir");
    s.dir = Eigen::Vector3d(d.at(0).get<double>(), d.at(1).get<double>(),
                            d.at(2).get<double>());
    if (!parse_status(j.at("status").get<std::string>(), s.status)) return false;
    if (!parse_verdict(j.at("verdict").get<std::string>(), s.kind)) return false;
    auto m = j.at("mu");
    s.mu = Eigen::Vector3i(m.at(0).get<int>(), m.at(1).get<int>(),
                           m.at(2).get<int>());
    s.c_minus = j.at("c_minus").get<double>();
    s.c_plus = j.at("c_plus").get<double>();
  } catch (const json::exception&) {
    return false;
  }
  return true;
}

// integer directions of height <= 10, one representative per ray pair
const std::vector<Eigen::Vector3d>& rational_directions() {
  static const std::vector<Eigen::Vector3d> dirs = [] {
    std::vector<Eigen::Vector3d> out;
    for (int a = -10; a <= 10; ++a)
      for (int b = -10; b <= 10; ++b)
        for (int c = -10; c <= 10; ++c) {
          if (a == 0 && b == 0 && c == 0) continue;
          if (a < 0 || (a == 0 && (b < 0 || (b == 0 && c < 0)))) continue;
          out.emplace_back(Eigen::Vector3d(a, b, c).normalized());
        }
    return out;
  }();
  return dirs;
}

bool near_rational(const Eigen::Vector3d& d) {
  for (const auto& r : rational_directions())
    if ((d - r).norm() < 1e-9 || (d + r).norm() < 1e-9) return true;
  return false;
}

}  // namespace

std::vector<Eigen::Vector3d> fibonacci_sphere(int count) {
  std::vector<Eigen::Vector3d> out;
  out.reserve(count);
  const double ga = M_PI * (3.0 - std::sqrt(5.0));  // golden angle
  for (int i = 0; i < count; ++i) {
    double z = 1.0 - 2.0 * (i + 0.5) / count;
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    double phi = ga * i;
    out.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
  }
  return out;
}

ZoneMap sweep(const TrigSeries& f, const SweepOptions& opt, int sample_count) {
  if (sample_count < 100)
    throw std::invalid_argument("sweep: sample_count must be >= 100");
  if (f.dimension() != 3)
    throw std::invalid_argument("sweep: series must have three quasiperiods");

  const double c = opt.policy == CPolicy::SymmetricZero ? 0.0 : opt.c;
  auto dirs = fibonacci_sphere(sample_count);

  ZoneMap out;
  out.samples.resize(sample_count);
  std::vector<bool> done(sample_count, false);

  // resume from the cache, ignoring malformed or out-of-range lines
  if (!opt.cache_path.empty()) {
    std::ifstream in(opt.cache_path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      json j = json::parse(line, nullptr, false);
      int index = -1;
      ZoneSample s;
      if (!sample_from_json(j, index, s)) continue;
      if (index < 0 || index >= sample_count) continue;
      out.samples[index] = s;
      done[index] = true;
    }
  }

  // surfaces shared across directions at a fixed level
  std::shared_ptr<const LevelSurface> M, M2;
  if (opt.policy != CPolicy::PerDirectionInterval) {
    M = std::make_shared<LevelSurface>(
        extract_level_surface(f, c, opt.resolution));
    M2 = std::make_shared<LevelSurface>(
        extract_level_surface(f, c, 2 * opt.resolution));
  }

  const double bound = f.coeff_norm();
  auto classify = [&](int i) {
    ZoneSample s;
    s.dir = dirs[i];
    if (near_rational(s.dir)) {
      s.dir = (s.dir + 1e-6 * s.dir.unitOrthogonal()).normalized();
      s.status = SampleStatus::Nudged;
    }
    try {
      if (opt.policy == CPolicy::PerDirectionInterval) {
        EnergyInterval U = energy_interval(f, s.dir, -bound, bound,
                                           opt.interval_tol, opt.resolution);
        s.c_minus = U.c_minus;
        s.c_plus = U.c_plus;
        if (U.kind == EnergyInterval::Empty) {
          s.kind = VerdictKind::NoOpenTrajectories;
        } else {
          Verdict v = verdict(f, s.dir, 0.5 * (U.c_minus + U.c_plus),
                              opt.resolution);
          s.kind = v.kind;
          s.mu = v.mu;
        }
      } else {
        Verdict v = verdict_on_surface(f, *M, s.dir, M2.get());
        s.kind = v.kind;
        s.mu = v.mu;
        s.c_minus = s.c_plus = c;
      }
    } catch (const std::exception&) {
      s.status = SampleStatus::Skipped;
      s.kind = VerdictKind::NoOpenTrajectories;
      s.mu.setZero();
    }
    return s;
  };

  std::mutex cache_mutex;  // single writer for cache commits
  std::ofstream cache;
  if (!opt.cache_path.empty())
    cache.open(opt.cache_path, std::ios::app);

  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= sample_count) return;
      if (done[i]) continue;
      ZoneSample s = classify(i);
      out.samples[i] = s;
      if (cache.is_open()) {
        std::lock_guard<std::mutex> lock(cache_mutex);
        cache << sample_to_json(i, s).dump() << "\n";
        cache.flush();
      }
    }
  };
  int nthreads = std::max(1, opt.threads);
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // zones: connected clusters of equal-label StableTCI samples over the
  // 6-nearest-neighbor graph of the sampled directions
  const int n = sample_count;
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  const int k = 6;
  for (int i = 0; i < n; ++i) {
    if (out.samples[i].kind != VerdictKind::StableTCI) continue;
    std::vector<std::pair<double, int>> near;
    for (int j = 0; j < n; ++j)
      if (j != i) near.push_back({(dirs[i] - dirs[j]).squaredNorm(), j});
    std::partial_sort(near.begin(), near.begin() + std::min<size_t>(k, near.size()),
                      near.end());
    for (int q = 0; q < k && q < static_cast<int>(near.size()); ++q) {
      int j = near[q].second;
      if (out.samples[j].kind != VerdictKind::StableTCI) continue;
      if (out.samples[j].mu != out.samples[i].mu) continue;
      parent[find(i)] = find(j);
    }
  }
  std::map<int, int> zone_id;
  for (int i = 0; i < n; ++i) {
    if (out.samples[i].kind != VerdictKind::StableTCI) continue;
    int r = find(i);
    auto it = zone_id.find(r);
    if (it == zone_id.end()) {
      it = zone_id.emplace(r, out.zone_count++).first;
      out.zone_labels.push_back(out.samples[i].mu);
    }
    out.samples[i].zone = it->second;
  }
  return out;
}

DimensionEstimate box_dimension(const std::vector<Eigen::Vector3d>& target) {
  if (target.empty())
    throw EmptyTarget("box_dimension: no target directions");
  DimensionEstimate est;
  est.low_resolution = target.size() < 10000;

  // two orthographic hemisphere charts, dyadic grids over [-1,1]^2
  std::vector<double> xs, ys;
  for (int k = 1; k <= 6; ++k) {
    const int cells = 1 << k;
    std::set<int64_t> occ;
    for (const auto& d0 : target) {
      Eigen::Vector3d d = d0.normalized();
      int chart = d[2] >= 0 ? 0 : 1;
      auto cell = [&](double u) {
        return std::clamp(static_cast<int>((u + 1.0) * 0.5 * cells), 0,
                          cells - 1);
      };
      occ.insert((static_cast<int64_t>(chart) * cells + cell(d[0])) * cells +
                 cell(d[1]));
    }
    est.box_sizes.push_back(2.0 / cells);
    est.counts.push_back(static_cast<long>(occ.size()));
    xs.push_back(static_cast<double>(k));                 // log2(1/size) + 1
    ys.push_back(std::log2(static_cast<double>(occ.size())));
  }
  // least-squares slope with a two-sigma confidence band
  const int m = static_cast<int>(xs.size());
  double xbar = std::accumulate(xs.begin(), xs.end(), 0.0) / m;
  double ybar = std::accumulate(ys.begin(), ys.end(), 0.0) / m;
  double sxx = 0, sxy = 0;
  for (int i = 0; i < m; ++i) {
    sxx += (xs[i] - xbar) * (xs[i] - xbar);
    sxy += (xs[i] - xbar) * (ys[i] - ybar);
  }
  double slope = sxy / sxx;
  double ss = 0;
  for (int i = 0; i < m; ++i) {
    double r = ys[i] - ybar - slope * (xs[i] - xbar);
    ss += r * r;
  }
  double se = std::sqrt(ss / std::max(1, m - 2) / sxx);
  est.alpha = std::clamp(slope, 0.0, 2.0);
  est.ci_half_width = 2.0 * se;
  return est;
}

DimensionEstimate box_dimension(const ZoneMap& zones) {
  std::vector<Eigen::Vector3d> target;
  for (const auto& s : zones.samples)
    if (s.kind != VerdictKind::StableTCI) target.push_back(s.dir);
  return box_dimension(target);
}

bool symmetric_level_check(const TrigSeries& f, const Eigen::Vector3d& p0) {
  // termwise: c_m (1 + exp(2 pi i m.p0)) = 0 for every term
  for (const auto& t : f.terms()) {
    double phase = 0.0;
    for (int d = 0; d < f.dimension(); ++d) phase += t.freq[d] * p0[d];
    std::complex<double> fac =
        1.0 + std::polar(1.0, kTwoPi * phase);
    if (std::abs(t.coeff * fac) > 1e-12 * (1.0 + std::abs(t.coeff)))
      return false;
  }
  // numerical cross-check on random points
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    Eigen::VectorXd p(f.dimension());
    for (int d = 0; d < f.dimension(); ++d) p[d] = uni(rng);
    Eigen::VectorXd q = p;
    for (int d = 0; d < std::min<int>(3, f.dimension()); ++d) q[d] += p0[d];
    if (std::abs(f.evaluate(q) + f.evaluate(p)) > 1e-10) return false;
  }
  return true;
}

}  // namespace ql
