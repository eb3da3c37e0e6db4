// quasilevel: command-line surface for the level-line classification library.
//
// Subcommands: trace, surface, decompose, interval, zones, profile4d,
// separator, verify4d, render, selftest. Results are written as JSON Lines
// records plus CSV tables and deterministic SVG figures; timing goes to
// stderr only, so artifacts are bit-identical across runs.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ql/atlas.hpp"
#include "ql/config.hpp"
#include "ql/errors.hpp"
#include "ql/foliation.hpp"
#include "ql/plane_slice.hpp"
#include "ql/qp_function.hpp"
#include "ql/records.hpp"
#include "ql/render_svg.hpp"
#include "ql/surface.hpp"
#include "ql/torus2.hpp"
#include "ql/torus4.hpp"
#include "ql/trace.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ql;

namespace {

struct Cli {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<int> threads;
  std::optional<long> seed;
  std::optional<int> resolution;
  std::optional<double> window;
  std::optional<double> tol;
};

RunConfig effective_config(const Cli& cli) {
  if (cli.config_path.empty())
    throw ConfigError("--config is required for this subcommand");
  RunConfig cfg = load_config(cli.config_path);
  if (cli.threads) cfg.threads = *cli.threads;
  if (cli.seed) cfg.seed = *cli.seed;
  if (cli.resolution) cfg.resolution = *cli.resolution;
  if (cli.window) cfg.window = *cli.window;
  if (cli.tol) cfg.tol = *cli.tol;
  if (cfg.resolution < 4) throw ConfigError("config key \"resolution\": must be at least 4");
  if (cfg.window <= 0) throw ConfigError("config key \"window\": must be positive");
  if (cfg.tol <= 0) throw ConfigError("config key \"tol\": must be positive");
  if (cfg.threads < 1) throw ConfigError("config key \"threads\": must be at least 1");
  if (const char* env = std::getenv("QUASILEVEL_CACHE"))
    if (*env) cfg.cache_dir = env;
  return cfg;
}

Eigen::Vector3d direction3(const RunConfig& cfg) {
  if (!cfg.direction || cfg.direction->size() != 3)
    throw ConfigError("config key \"direction\": a 3-vector is required here");
  return *cfg.direction;
}

DirectionPair direction_pair(const RunConfig& cfg) {
  if (!cfg.ell1)
    throw ConfigError("config key \"ell1\": required for four-quasiperiod runs");
  if (!cfg.direction || cfg.direction->size() != 4)
    throw ConfigError("config key \"direction\": a 4-vector (ell2) is required here");
  try {
    return make_direction_pair(*cfg.ell1, Eigen::Vector4d(*cfg.direction));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config key \"ell1\"/\"direction\": ") + e.what());
  }
}

std::vector<Eigen::Vector2d> offsets_or_origin(const RunConfig& cfg) {
  if (cfg.offsets.empty()) return {Eigen::Vector2d::Zero()};
  return cfg.offsets;
}

std::vector<double> levels_required(const RunConfig& cfg) {
  if (cfg.levels.empty())
    throw ConfigError("config key \"levels\": at least one level is required");
  return cfg.levels;
}

unsigned effective_seed(const RunConfig& cfg) {
  return cfg.seed == 0 ? 2026u : static_cast<unsigned>(cfg.seed);
}

/// Restriction of the configured series to one affine plane: the identity
/// plane for n = 2, {B . x = u} for n = 3, {ell1 = u, ell2 = v} for n = 4.
QuasiperiodicFunction plane_restriction(const RunConfig& cfg,
                                        const TrigSeries& f,
                                        const Eigen::Vector2d& offset) {
  if (cfg.dimension == 2) {
    return QuasiperiodicFunction(
        f, AffineEmbedding(Eigen::Matrix2d::Identity(), offset));
  }
  if (cfg.dimension == 3) {
    Eigen::MatrixXd K(1, 3);
    K.row(0) = direction3(cfg).transpose();
    Eigen::VectorXd a(1);
    a << offset[0];
    return slice_function(f, PlaneSlice::from_casimirs(K, a));
  }
  DirectionPair dp = direction_pair(cfg);
  Eigen::MatrixXd K(2, 4);
  K.row(0) = dp.ell1.cast<double>().transpose();
  K.row(1) = dp.ell2.transpose();
  Eigen::VectorXd a(2);
  a << offset[0], offset[1];
  return slice_function(f, PlaneSlice::from_casimirs(K, a));
}

void write_text(const std::string& path, const std::string& text) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc | std::ios::binary);
    if (!out) throw ConfigError("cannot write artifact: " + tmp);
    out << text;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw ConfigError("atomic replace failed: " + path);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

const char* kind_name(TrajectoryKind k) {
  switch (k) {
    case TrajectoryKind::Compact: return "compact";
    case TrajectoryKind::OpenStrong: return "open_strong";
    case TrajectoryKind::OpenWeak: return "open_weak";
    default: return "undetermined";
  }
}

const char* verdict_name(VerdictKind k) {
  switch (k) {
    case VerdictKind::StableTCI: return "stable_tci";
    case VerdictKind::Chaotic: return "chaotic";
    default: return "no_open_trajectories";
  }
}

// ---------------------------------------------------------------- trace ----

int cmd_trace(const Cli& cli) {
  RunConfig cfg = effective_config(cli);
  TrigSeries f = cfg.series();
  std::string hash = cfg.hash();
  double step = 1.0 / cfg.resolution;

  std::vector<ResultRecord> records;
  std::vector<std::vector<std::string>> rows;
  int id = 0;
  for (const auto& off : offsets_or_origin(cfg)) {
    QuasiperiodicFunction qp2 = plane_restriction(cfg, f, off);
    for (double c : levels_required(cfg)) {
      auto trajs = trace_level(qp2, c, cfg.window, step);
      json jt = json::array();
      for (const auto& t : trajs) {
        AsymptoticFit fit;  // tiny fragments stay Undetermined
        if (t.vertices.size() >= 16) {
          try {
            fit = classify_and_fit(qp2, t, cfg.window, step);
          } catch (const DomainError&) {
          }
        }
        json verts = json::array();
        for (const auto& v : t.vertices) verts.push_back({v[0], v[1]});
        jt.push_back({{"vertices", verts},
                      {"closed", t.closed},
                      {"kind", kind_name(fit.kind)},
                      {"direction", {fit.direction[0], fit.direction[1]}},
                      {"deviation", fit.deviation_sup},
                      {"diameter", t.diameter()}});
        rows.push_back({std::to_string(id++), t.closed ? "1" : "0",
                        fmt(t.diameter()),
                        fmt(fit.direction[0]) + ";" + fmt(fit.direction[1]),
                        fmt(fit.deviation_sup)});
      }
      records.push_back({"trace", hash,
                         {{"kind", "trajectories"},
                          {"level", c},
                          {"offset", {off[0], off[1]}},
                          {"window", cfg.window},
                          {"trajectories", jt}},
                         kRecordSchemaVersion});
    }
  }
  write_records((fs::path(cli.out_dir) / "trace.jsonl").string(), records);
  write_text((fs::path(cli.out_dir) / "trace.csv").string(),
             to_csv({"id", "closed", "diameter", "direction", "deviation"}, rows));
  for (size_t i = 0; i < records.size(); ++i)
    write_text((fs::path(cli.out_dir) / ("trace_" + std::to_string(i) + ".svg"))
                   .string(),
               render_svg(records[i]));
  return 0;
}

// -------------------------------------------------------------- surface ----

int cmd_surface(const Cli& cli) {
  RunConfig cfg = effective_config(cli);
  if (cfg.dimension != 3)
    throw ConfigError("config key \"dimension\": surface requires dimension 3");
  TrigSeries f = cfg.series();
  std::string hash = cfg.hash();

  std::vector<ResultRecord> records;
  std::vector<std::vector<std::string>> rows;
  for (double c : levels_required(cfg)) {
    LevelSurface M = extract_level_surface(f, c, cfg.resolution);
    json jc = json::array();
    for (size_t i = 0; i < M.components.size(); ++i) {
      const auto& comp = M.components[i];
      jc.push_back({{"chi", comp.chi},
                    {"genus", comp.genus},
                    {"homology", {comp.homology[0], comp.homology[1],
                                  comp.homology[2]}},
                    {"rank", comp.rank},
                    {"triangles", (long)comp.triangles.size()}});
      rows.push_back({fmt(c), std::to_string(i), std::to_string(comp.chi),
                      std::to_string(comp.genus),
                      std::to_string(comp.homology[0]) + ";" +
                          std::to_string(comp.homology[1]) + ";" +
                          std::to_string(comp.homology[2])});
    }
    records.push_back({"surface", hash,
                       {{"kind", "surface"},
                        {"level", c},
                        {"resolution", M.resolution},
                        {"vertex_count", (long)M.vertices.size()},
                        {"components", jc}},
                       kRecordSchemaVersion});
  }
  write_records((fs::path(cli.out_dir) / "surface.jsonl").string(), records);
  write_text((fs::path(cli.out_dir) / "surface.csv").string(),
             to_csv({"level", "component", "chi", "genus", "homology"}, rows));
  return 0;
}

// ------------------------------------------------------------ decompose ----

int cmd_decompose(const Cli& cli) {
  RunConfig cfg = effective_config(cli);
  if (cfg.dimension != 3)
    throw ConfigError("config key \"dimension\": decompose requires dimension 3");
  TrigSeries f = cfg.series();
  Eigen::Vector3d B = direction3(cfg);
  std::string hash = cfg.hash();

  std::vector<ResultRecord> records;
  for (double c : levels_required(cfg)) {
    LevelSurface M = extract_level_surface(f, c, cfg.resolution);
    FoliationSingularities sing = foliation_singularities(f, M, B);
    FoliationDecomposition dec = decompose(f, M, B, sing);
    Verdict v = verdict_on_surface(f, M, B);
    json jcar = json::array();
    for (const auto& car : dec.carriers)
      jcar.push_back({{"genus", car.genus},
                      {"class", {car.cls[0], car.cls[1], car.cls[2]}},
                      {"boundary_loops", car.boundary_loops}});
    records.push_back(
        {"decompose", hash,
         {{"kind", "decomposition"},
          {"level", c},
          {"verdict", verdict_name(v.kind)},
          {"mu", {v.mu[0], v.mu[1], v.mu[2]}},
          {"eta", {v.eta[0], v.eta[1], v.eta[2]}},
          {"torus_count", v.torus_count},
          {"cylinders", (long)dec.cylinders.size()},
          {"carriers", jcar},
          {"saddles", (long)sing.connections.size()}},
         kRecordSchemaVersion});
  }
  write_records((fs::path(cli.out_dir) / "decompose.jsonl").string(), records);
  return 0;
}

// ------------------------------------------------------------- interval ----

int cmd_interval(const Cli& cli) {
  RunConfig cfg = effective_config(cli);
  if (cfg.dimension != 3)
    throw ConfigError("config key \"dimension\": interval requires dimension 3");
  TrigSeries f = cfg.series();
  Eigen::Vector3d B = direction3(cfg);
  double bound = f.coeff_norm() + 1e-3;
  EnergyInterval U =
      energy_interval(f, B, -bound, bound, cfg.tol, cfg.resolution);
  const char* kind = U.kind == EnergyInterval::Interval ? "interval"
                     : U.kind == EnergyInterval::Point  ? "point"
                                                        : "empty";
  ResultRecord rec{"interval", cfg.hash(),
                   {{"kind", "energy_interval"},
                    {"interval_kind", kind},
                    {"c_minus", U.c_minus},
                    {"c_plus", U.c_plus}},
                   kRecordSchemaVersion};
  write_records((fs::path(cli.out_dir) / "interval.jsonl").string(), {rec});
  return 0;
}

// ---------------------------------------------------------------- zones ----

json zone_map_payload(const ZoneMap& zm) {
  json js = json::array();
  for (const auto& s : zm.samples) {
    const char* status = s.status == SampleStatus::Ok      ? "ok"
                         : s.status == SampleStatus::Nudged ? "nudged"
                                                            : "skipped";
    js.push_back({{"dir", {s.dir[0], s.dir[1], s.dir[2]}},
                  {"status", status},
                  {"verdict", verdict_name(s.kind)},
                  {"mu", {s.mu[0], s.mu[1], s.mu[2]}},
                  {"c_minus", s.c_minus},
                  {"c_plus", s.c_plus},
                  {"zone", s.zone}});
  }
  json jl = json::array();
  for (const auto& l : zm.zone_labels) jl.push_back({l[0], l[1], l[2]});
  return {{"kind", "zone_map"},
          {"samples", js},
          {"zone_count", zm.zone_count},
          {"zone_labels", jl}};
}

int cmd_zones(const Cli& cli) {
  RunConfig cfg = effective_config(cli);
  if (cfg.dimension != 3)
    throw ConfigError("config key \"dimension\": zones requires dimension 3");
  if (cfg.samples <= 0)
    throw ConfigError("config key \"samples\": a positive sweep size is required");
  TrigSeries f = cfg.series();
  std::string hash = cfg.hash();

  SweepOptions opt;
  opt.policy = cfg.policy == "symmetric"  ? CPolicy::SymmetricZero
               : cfg.policy == "interval" ? CPolicy::PerDirectionInterval
                                          : CPolicy::FixedC;
  opt.c = cfg.levels.empty() ? 0.0 : cfg.levels[0];
  opt.resolution = cfg.resolution;
  opt.threads = cfg.threads;
  if (!cfg.cache_dir.empty()) {
    fs::create_directories(cfg.cache_dir);
    opt.cache_path =
        (fs::path(cfg.cache_dir) / ("zones-" + hash + ".jsonl")).string();
  }
  ZoneMap zm = [&] {
    try {
      return sweep(f, opt, cfg.samples);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config key \"samples\": ") + e.what());
    }
  }();
  DimensionEstimate dim = box_dimension(zm);

  json payload = zone_map_payload(zm);
  payload["complement_box_dimension"] = {{"alpha", dim.alpha},
                                         {"ci_half_width", dim.ci_half_width},
                                         {"low_resolution", dim.low_resolution}};
  ResultRecord rec{"zones", hash, payload, kRecordSchemaVersion};
  write_records((fs::path(cli.out_dir) / "zones.jsonl").string(), {rec});

  std::vector<std::vector<std::string>> rows;
  for (const auto& s : zm.samples)
    rows.push_back({fmt(s.dir[0]), fmt(s.dir[1]), fmt(s.dir[2]),
                    verdict_name(s.kind),
                    std::to_string(s.mu[0]) + ";" + std::to_string(s.mu[1]) +
                        ";" + std::to_string(s.mu[2]),
                    std::to_string(s.zone)});
  write_text((fs::path(cli.out_dir) / "zones.csv").string(),
             to_csv({"dir_x", "dir_y", "dir_z", "verdict", "mu", "zone"}, rows));
  write_text((fs::path(cli.out_dir) / "zones.svg").string(), render_svg(rec));
  return 0;
}

// ------------------------------------------------------------- torus4 -----

json profile_payload(const SliceProfile& prof) {
  json je = json::array();
  for (const auto& e : prof.entries)
    je.push_back({{"t", e.t},
                  {"failed", e.failed},
                  {"empty", e.interval.kind == EnergyInterval::Empty},
                  {"c_minus", e.interval.c_minus},
                  {"c_plus", e.interval.c_plus},
                  {"stable", e.kind == VerdictKind::StableTCI},
                  {"mu", {e.mu[0], e.mu[1], e.mu[2]}}});
  const char* ck = prof.case_kind == CaseKind::Case1   ? "case1"
                   : prof.case_kind == CaseKind::Case2 ? "case2"
                                                       : "degenerate";
  return {{"kind", "slice_profile"}, {"entries", je},     {"case", ck},
          {"min_c_plus", prof.min_c_plus},
          {"max_c_minus", prof.max_c_minus},
          {"any_empty", prof.any_empty},
          {"max_jump", prof.max_jump}};
}

int cmd_profile4d(const Cli& cli) {
  RunConfig cfg = effective_config(cli);
  if (cfg.dimension != 4)
    throw ConfigError("config key \"dimension\": profile4d requires dimension 4");
  TrigSeries f = cfg.series();
  DirectionPair dp = direction_pair(cfg);
  SliceProfile prof =
      slice_profile(f, dp, cfg.t_samples, cfg.tol, cfg.resolution);
  ResultRecord rec{"profile4d", cfg.hash(), profile_payload(prof),
                   kRecordSchemaVersion};
  write_records((fs::path(cli.out_dir) / "profile4d.jsonl").string(), {rec});
  write_text((fs::path(cli.out_dir) / "profile4d.svg").string(),
             render_svg(rec));
  return 0;
}

int cmd_separator(const Cli& cli) {
  RunConfig cfg = effective_config(cli);
  if (cfg.dimension != 4)
    throw ConfigError("config key \"dimension\": separator requires dimension 4");
  TrigSeries f = cfg.series();
  DirectionPair dp = direction_pair(cfg);
  double c = levels_required(cfg)[0];
  SliceProfile prof =
      slice_profile(f, dp, cfg.t_samples, cfg.tol, cfg.resolution);
  int samples = cfg.samples > 0 ? cfg.samples : 8;
  SeparatorReport rep = construct_separator(f, dp, c, prof, samples,
                                            cfg.window, effective_seed(cfg));
  const char* pos = rep.position == Position::EssentiallyBelow   ? "below"
                    : rep.position == Position::EssentiallyAbove ? "above"
                                                                 : "neither";
  ResultRecord rec{
      "separator", cfg.hash(),
      {{"kind", "separator"},
       {"level", c},
       {"separator_kind", rep.N.kind == Separator3Manifold::TSlice
                              ? "t_slice"
                              : "bar_level"},
       {"t", rep.N.t},
       {"bar_level", rep.N.level},
       {"class", {rep.N.cls[0], rep.N.cls[1], rep.N.cls[2], rep.N.cls[3]}},
       {"position", pos},
       {"samples", rep.samples},
       {"max_deviation", rep.max_deviation},
       {"max_compact_diameter", rep.max_compact_diameter}},
      kRecordSchemaVersion};
  write_records((fs::path(cli.out_dir) / "separator.jsonl").string(), {rec});
  return 0;
}

int cmd_verify4d(const Cli& cli) {
  RunConfig cfg = effective_config(cli);
  if (cfg.dimension != 4)
    throw ConfigError("config key \"dimension\": verify4d requires dimension 4");
  TrigSeries f = cfg.series();
  DirectionPair dp = direction_pair(cfg);
  double c = levels_required(cfg)[0];
  int samples = cfg.samples > 0 ? cfg.samples : 8;
  Theorem1Report rep =
      verify_theorem1(f, dp, c, samples, cfg.window, effective_seed(cfg));
  ResultRecord rec{"verify4d", cfg.hash(),
                   {{"kind", "theorem1"},
                    {"level", c},
                    {"passed", rep.passed},
                    {"samples", rep.samples},
                    {"open_count", rep.open_count},
                    {"compact_count", rep.compact_count},
                    {"direction", {rep.direction[0], rep.direction[1]}},
                    {"max_angle", rep.max_angle},
                    {"C_est", rep.C_est},
                    {"D_est", rep.D_est},
                    {"estimates_stable", rep.estimates_stable},
                    {"reason", rep.reason}},
                   kRecordSchemaVersion};
  write_records((fs::path(cli.out_dir) / "verify4d.jsonl").string(), {rec});
  if (!rep.passed) {
    std::cerr << "verify4d: " << rep.reason << "\n";
    return 1;
  }
  return 0;
}

// --------------------------------------------------------------- render ----

int cmd_render(const Cli& cli, const std::string& records_path) {
  if (records_path.empty())
    throw ConfigError("render: a records file argument is required");
  auto records = read_records(records_path);
  int rendered = 0;
  for (size_t i = 0; i < records.size(); ++i)
    write_text(
        (fs::path(cli.out_dir) / ("render_" + std::to_string(i) + ".svg"))
            .string(),
        render_svg(records[i])),
        ++rendered;
  std::cerr << "render: " << rendered << " figure(s)\n";
  return 0;
}

// ------------------------------------------------------------- selftest ----

int cmd_selftest(const Cli& cli) {
  (void)cli;
  int failures = 0;
  auto check = [&](const char* name, bool ok) {
    std::cout << (ok ? "ok - " : "FAIL - ") << name << "\n";
    if (!ok) ++failures;
  };

  // cos + cos at c = 1 on the identity plane: closed ovals only
  {
    TrigSeries f(2);
    f.add_cos({1, 0}, 1.0);
    f.add_cos({0, 1}, 1.0);
    QuasiperiodicFunction qp2(
        f, AffineEmbedding(Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero()));
    auto trajs = trace_level(qp2, 1.0, 3.0, 1.0 / 16);
    bool ok = !trajs.empty();
    for (const auto& t : trajs) ok = ok && (t.closed || t.hit_boundary);
    check("trace: cos+cos ovals at c=1", ok);
  }

  // n = 2 Morse case on the torus: two noncompact components, classes +-(1,0)
  {
    TrigSeries f(2);
    f.add_cos({1, 0}, 1.0);
    f.add_cos({0, 1}, 0.5);
    auto comps = torus2_level_classes(f, 0.1);
    int open = 0;
    bool ok = true;
    for (const auto& comp : comps)
      if (comp.homology != Eigen::Vector2i::Zero()) {
        ++open;
        ok = ok && comp.homology.cwiseAbs() == Eigen::Vector2i(0, 1);
      }
    check("torus2: two noncompact components winding the y cycle", ok && open == 2);
  }

  // config hashing: deterministic, thread-count independent, typo-rejecting
  {
    const char* text = R"({"function": {"dimension": 3,
      "terms": [{"freq": [1, 0, 0], "cos": 1.0}]}, "level": 0.1})";
    RunConfig a = parse_config(text), b = parse_config(text);
    b.threads = 7;
    bool rejected = false;
    try {
      parse_config("{\"function\": {\"dimension\": 3, \"terms\": "
                   "[{\"freq\": [1, 0, 0], \"cos\": 1.0}]}, \"wandow\": 1}");
    } catch (const ConfigError&) {
      rejected = true;
    }
    check("config: canonical hash and unknown-key rejection",
          a.hash() == b.hash() && a.hash().size() == 64 && rejected);
  }

  // records round-trip and CSV quoting
  {
    ResultRecord r{"selftest", "h", {{"value", 1.5}}, kRecordSchemaVersion};
    ResultRecord back = ResultRecord::from_json(r.to_json());
    std::string csv = to_csv({"a"}, {{"x,\"y\""}});
    check("records: round-trip and RFC 4180 quoting",
          back.payload == r.payload && csv == "a\r\n\"x,\"\"y\"\"\"\r\n");
  }

  // deterministic SVG
  {
    ResultRecord r;
    r.payload = {{"kind", "trajectories"},
                 {"window", 1.0},
                 {"trajectories",
                  {{{"closed", true},
                    {"vertices", {{0.0, 0.0}, {0.5, 0.0}, {0.5, 0.5}}}}}}};
    check("render: bit-identical SVG", render_svg(r) == render_svg(r));
  }

  // symmetric level detection on sin-sum
  {
    bool sym = symmetric_level_check(TrigSeries::cos_sum(3),
                                     Eigen::Vector3d(0.5, 0.5, 0.5));
    bool asym = symmetric_level_check(TrigSeries::cos_sum(3),
                                      Eigen::Vector3d(0.25, 0.5, 0.5));
    check("atlas: symmetric level check", sym && !asym);
  }

  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"level-line classification of quasiperiodic functions"};
  app.require_subcommand(1);

  Cli cli;
  std::string records_path;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", cli.config_path, "configuration file (JSON)");
    sub->add_option("--out", cli.out_dir, "output directory");
    sub->add_option("--threads", cli.threads, "worker thread count");
    sub->add_option("--seed", cli.seed, "random seed override");
    sub->add_option("--resolution", cli.resolution, "grid resolution override");
    sub->add_option("--window", cli.window, "window radius override");
    sub->add_option("--tol", cli.tol, "tolerance override");
    return sub;
  };

  auto* s_trace = add_common(app.add_subcommand("trace", "trace level lines on affine planes"));
  auto* s_surface = add_common(app.add_subcommand("surface", "extract level surfaces in T^3"));
  auto* s_decompose = add_common(app.add_subcommand("decompose", "foliation decomposition and verdict"));
  auto* s_interval = add_common(app.add_subcommand("interval", "energy interval of open trajectories"));
  auto* s_zones = add_common(app.add_subcommand("zones", "stability-zone sweep over S^2"));
  auto* s_profile = add_common(app.add_subcommand("profile4d", "per-slice energy profile on T^4"));
  auto* s_separator = add_common(app.add_subcommand("separator", "construct a separating 3-manifold"));
  auto* s_verify = add_common(app.add_subcommand("verify4d", "verify strong asymptotics on sampled planes"));
  auto* s_render = add_common(app.add_subcommand("render", "render stored records to SVG"));
  s_render->add_option("records", records_path, "records file (JSON Lines)");
  auto* s_selftest = app.add_subcommand("selftest", "run the built-in example suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  auto t0 = std::chrono::steady_clock::now();
  int status = 0;
  try {
    fs::create_directories(cli.out_dir);
    if (s_trace->parsed()) status = cmd_trace(cli);
    else if (s_surface->parsed()) status = cmd_surface(cli);
    else if (s_decompose->parsed()) status = cmd_decompose(cli);
    else if (s_interval->parsed()) status = cmd_interval(cli);
    else if (s_zones->parsed()) status = cmd_zones(cli);
    else if (s_profile->parsed()) status = cmd_profile4d(cli);
    else if (s_separator->parsed()) status = cmd_separator(cli);
    else if (s_verify->parsed()) status = cmd_verify4d(cli);
    else if (s_render->parsed()) status = cmd_render(cli, records_path);
    else if (s_selftest->parsed()) status = cmd_selftest(cli);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 1;
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::fprintf(stderr, "[timing] %.2fs\n", secs);
  return status;
}
