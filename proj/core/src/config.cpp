#include "ql/config.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "ql/errors.hpp"

namespace ql {

namespace {

using nlohmann::json;

/// 1-based line of the first occurrence of "key" in the source text, for
/// error messages. 0 when not found.
int key_line(const std::string& text, const std::string& key) {
  std::string needle = "\"" + key + "\"";
  size_t pos = text.find(needle);
  if (pos == std::string::npos) return 0;
  return 1 + (int)std::count(text.begin(), text.begin() + (long)pos, '\n');
}

[[noreturn]] void bad_key(const std::string& text, const std::string& key,
                          const std::string& what) {
  std::ostringstream os;
  os << "config key \"" << key << "\"";
  if (int line = key_line(text, key)) os << " (line " << line << ")";
  os << ": " << what;
  throw ConfigError(os.str());
}

void reject_unknown(const std::string& text, const json& obj,
                    const std::set<std::string>& known,
                    const std::string& where) {
  for (const auto& [k, v] : obj.items())
    if (!known.count(k))
      bad_key(text, k, "unknown key in " + where);
}

template <typename T>
T get_as(const std::string& text, const json& obj, const std::string& key,
         T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    bad_key(text, key, "wrong type");
  }
}

}  // namespace

TrigSeries RunConfig::series() const {
  TrigSeries f(dimension);
  for (const auto& t : terms) f.add_term(t.freq, {t.re, t.im});
  return f;
}

std::string RunConfig::canonical_json() const {
  json j;
  j["dimension"] = dimension;
  json jt = json::array();
  for (const auto& t : terms)
    jt.push_back({{"freq", t.freq}, {"re", t.re}, {"im", t.im}});
  j["terms"] = jt;
  if (direction) {
    std::vector<double> d(direction->data(), direction->data() + direction->size());
    j["direction"] = d;
  }
  if (ell1) j["ell1"] = {(*ell1)[0], (*ell1)[1], (*ell1)[2], (*ell1)[3]};
  j["samples"] = samples;
  j["policy"] = policy;
  j["t_samples"] = t_samples;
  j["levels"] = levels;
  json jo = json::array();
  for (const auto& o : offsets) jo.push_back({o[0], o[1]});
  j["offsets"] = jo;
  j["window"] = window;
  j["resolution"] = resolution;
  j["tol"] = tol;
  j["seed"] = seed;
  // threads and cache location do not affect results and are not hashed
  return j.dump();  // nlohmann::json orders keys lexicographically
}

std::string RunConfig::hash() const {
  std::string text = canonical_json();
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");

  reject_unknown(text, j,
                 {"function", "direction", "ell1", "samples", "policy",
                  "t_samples", "levels", "level", "offsets", "window",
                  "resolution", "tol", "seed", "threads", "cache"},
                 "the config root");

  RunConfig c;
  if (!j.contains("function"))
    throw ConfigError("config key \"function\" is required");
  const json& fn = j.at("function");
  if (!fn.is_object()) bad_key(text, "function", "must be an object");
  reject_unknown(text, fn, {"dimension", "terms"}, "\"function\"");
  c.dimension = get_as<int>(text, fn, "dimension", 3);
  if (c.dimension < 2 || c.dimension > 4)
    bad_key(text, "dimension", "must be 2, 3, or 4");
  if (!fn.contains("terms") || !fn.at("terms").is_array())
    bad_key(text, "terms", "must be an array of terms");
  for (const auto& t : fn.at("terms")) {
    if (!t.is_object()) bad_key(text, "terms", "each term must be an object");
    reject_unknown(text, t, {"freq", "re", "im", "cos", "sin"}, "a term");
    RunConfig::Term term;
    term.freq = get_as<std::vector<int>>(text, t, "freq", {});
    if ((int)term.freq.size() != c.dimension)
      bad_key(text, "freq", "length must equal the dimension");
    if (t.contains("cos")) {
      term.re = get_as<double>(text, t, "cos", 0.0) / 2.0;
    } else if (t.contains("sin")) {
      term.im = -get_as<double>(text, t, "sin", 0.0) / 2.0;
    } else {
      term.re = get_as<double>(text, t, "re", 0.0);
      term.im = get_as<double>(text, t, "im", 0.0);
    }
    c.terms.push_back(term);
  }
  if (c.terms.empty()) bad_key(text, "terms", "at least one term is required");

  if (j.contains("direction")) {
    auto d = get_as<std::vector<double>>(text, j, "direction", {});
    if ((int)d.size() != c.dimension)
      bad_key(text, "direction", "length must equal the dimension");
    c.direction = Eigen::Map<Eigen::VectorXd>(d.data(), (long)d.size());
  }
  if (j.contains("ell1")) {
    auto d = get_as<std::vector<int>>(text, j, "ell1", {});
    if (d.size() != 4) bad_key(text, "ell1", "must have four integer entries");
    c.ell1 = Eigen::Vector4i(d[0], d[1], d[2], d[3]);
  }
  c.samples = get_as<int>(text, j, "samples", 0);
  if (c.samples < 0) bad_key(text, "samples", "must be nonnegative");
  c.policy = get_as<std::string>(text, j, "policy", "fixed");
  if (c.policy != "fixed" && c.policy != "symmetric" && c.policy != "interval")
    bad_key(text, "policy", "must be \"fixed\", \"symmetric\", or \"interval\"");
  c.t_samples = get_as<int>(text, j, "t_samples", 16);
  if (c.t_samples < 2) bad_key(text, "t_samples", "must be at least 2");

  if (j.contains("levels")) {
    c.levels = get_as<std::vector<double>>(text, j, "levels", {});
  }
  if (j.contains("level")) {
    c.levels.push_back(get_as<double>(text, j, "level", 0.0));
  }
  if (j.contains("offsets")) {
    if (!j.at("offsets").is_array()) bad_key(text, "offsets", "must be an array");
    for (const auto& o : j.at("offsets")) {
      std::vector<double> p;
      try {
        p = o.get<std::vector<double>>();
      } catch (const json::exception&) {
        bad_key(text, "offsets", "each offset must be a pair of numbers");
      }
      if (p.size() != 2)
        bad_key(text, "offsets", "each offset must be a pair of numbers");
      c.offsets.emplace_back(p[0], p[1]);
    }
  }

  c.window = get_as<double>(text, j, "window", 6.0);
  if (c.window <= 0) bad_key(text, "window", "must be positive");
  c.resolution = get_as<int>(text, j, "resolution", 16);
  if (c.resolution < 4) bad_key(text, "resolution", "must be at least 4");
  c.tol = get_as<double>(text, j, "tol", 1e-3);
  if (c.tol <= 0) bad_key(text, "tol", "must be positive");
  c.seed = get_as<long>(text, j, "seed", 0);
  c.threads = get_as<int>(text, j, "threads", 1);
  if (c.threads < 1) bad_key(text, "threads", "must be at least 1");
  c.cache_dir = get_as<std::string>(text, j, "cache", "");
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  try {
    return parse_config(os.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace ql
