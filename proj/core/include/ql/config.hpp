#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "ql/trig_series.hpp"

namespace ql {

/// Parsed run configuration. One JSON document drives every subcommand;
/// irrelevant sections are simply unused. Unknown keys are rejected.
struct RunConfig {
  // function spec
  int dimension = 3;
  struct Term {
    std::vector<int> freq;
    double re = 0.0, im = 0.0;
  };
  std::vector<Term> terms;

  // direction spec: a single covector, a four-quasiperiod pair, or a sweep
  std::optional<Eigen::VectorXd> direction;  // B (n = 3) or ell2 (n = 4)
  std::optional<Eigen::Vector4i> ell1;
  int samples = 0;          // sweep / verification sample count
  std::string policy;       // "fixed" | "symmetric" | "interval" (zones)
  int t_samples = 16;       // slice-profile grid

  // levels and offsets
  std::vector<double> levels;
  std::vector<Eigen::Vector2d> offsets;  // affine plane offsets (trace)

  // numeric overrides
  double window = 6.0;
  int resolution = 16;
  double tol = 1e-3;
  long seed = 0;
  int threads = 1;
  std::string cache_dir;

  TrigSeries series() const;

  /// Canonical sorted-key single-line JSON of the full configuration
  /// (defaults materialized), the determinism key for caching.
  std::string canonical_json() const;
  /// Hex SHA-256 of canonical_json().
  std::string hash() const;
};

/// Parses and validates a configuration document. Unknown keys, wrong types,
/// and non-positive tolerances are ConfigError; messages name the offending
/// key and its line in the source text.
RunConfig parse_config(const std::string& json_text);

/// Reads the file and delegates to parse_config; the filename is prepended
/// to error messages.
RunConfig load_config(const std::string& path);

}  // namespace ql
