#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "ql/config.hpp"
#include "ql/errors.hpp"
#include "ql/records.hpp"
#include "ql/render_svg.hpp"

using namespace ql;

namespace {

const char* kBasicConfig = R"({
  "function": {
    "dimension": 3,
    "terms": [
      {"freq": [1, 0, 0], "cos": 1.0},
      {"freq": [0, 1, 0], "cos": 1.0},
      {"freq": [0, 0, 1], "cos": 1.0}
    ]
  },
  "direction": [1.0, 1.4142135623730951, 1.7320508075688772],
  "level": 0.1,
  "window": 6.0
})";

std::string tmp_path(const char* name) {
  return std::string("/tmp/ql_test_") + name;
}

}  // namespace

TEST_CASE("config parses terms, direction, and level") {
  RunConfig c = parse_config(kBasicConfig);
  CHECK(c.dimension == 3);
  CHECK(c.terms.size() == 3);
  CHECK(c.terms[0].re == doctest::Approx(0.5));
  CHECK(c.terms[0].im == 0.0);
  REQUIRE(c.direction.has_value());
  CHECK((*c.direction)(2) == doctest::Approx(1.7320508075688772));
  REQUIRE(c.levels.size() == 1);
  CHECK(c.levels[0] == doctest::Approx(0.1));
  CHECK(c.window == doctest::Approx(6.0));

  TrigSeries f = c.series();
  CHECK(f.evaluate(Eigen::Vector3d::Zero()) == doctest::Approx(3.0));
}

TEST_CASE("config errors name the offending key and its line") {
  std::string bad = R"({
  "function": {"dimension": 3,
    "terms": [{"freq": [1, 0, 0], "cos": 1.0}]},
  "wandow": 6.0
})";
  try {
    parse_config(bad);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    std::string msg = e.what();
    CHECK(msg.find("wandow") != std::string::npos);
    CHECK(msg.find("line 4") != std::string::npos);
  }
}

TEST_CASE("config validation rejects bad values") {
  auto with = [](const std::string& extra) {
    return std::string(R"({"function": {"dimension": 3,
      "terms": [{"freq": [1, 0, 0], "cos": 1.0}]},)") +
           extra + "}";
  };
  CHECK_THROWS_AS(parse_config(with("\"tol\": 0")), ConfigError);
  CHECK_THROWS_AS(parse_config(with("\"resolution\": 2")), ConfigError);
  CHECK_THROWS_AS(parse_config(with("\"window\": -1")), ConfigError);
  CHECK_THROWS_AS(parse_config(with("\"policy\": \"bogus\"")), ConfigError);
  CHECK_THROWS_AS(parse_config(with("\"threads\": 0")), ConfigError);
  CHECK_THROWS_AS(parse_config(with("\"direction\": [1.0, 2.0]")), ConfigError);
  CHECK_THROWS_AS(parse_config("{\"function\": {\"dimension\": 7, "
                               "\"terms\": [{\"freq\": [1], \"cos\": 1}]}}"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("not json"), ConfigError);
  CHECK_THROWS_AS(parse_config("{}"), ConfigError);
}

TEST_CASE("config hash is deterministic and ignores threads and cache") {
  RunConfig a = parse_config(kBasicConfig);
  RunConfig b = parse_config(kBasicConfig);
  CHECK(a.hash() == b.hash());
  CHECK(a.hash().size() == 64);

  b.threads = 8;
  b.cache_dir = "/somewhere/else";
  CHECK(a.hash() == b.hash());

  b.tol = 2e-3;
  CHECK(a.hash() != b.hash());
}

TEST_CASE("records round-trip exactly through the JSONL file") {
  ResultRecord r1{"trace", "abc123", {{"kind", "trajectories"},
                                      {"window", 6.0},
                                      {"trajectories", nlohmann::json::array()}},
                  kRecordSchemaVersion};
  ResultRecord r2{"interval", "abc123",
                  {{"c_minus", -0.25}, {"c_plus", 0.5}}, kRecordSchemaVersion};
  std::string path = tmp_path("records.jsonl");
  write_records(path, {r1, r2});
  auto back = read_records(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].op == "trace");
  CHECK(back[0].payload == r1.payload);
  CHECK(back[1].payload == r2.payload);
  CHECK(back[1].version == kRecordSchemaVersion);
  std::remove(path.c_str());
}

TEST_CASE("a torn trailing line is tolerated, mid-file corruption is not") {
  std::string path = tmp_path("torn.jsonl");
  {
    std::ofstream out(path, std::ios::trunc);
    out << ResultRecord{"trace", "h", {{"i", 1}}, "1"}.to_json().dump() << "\n";
    out << "{\"op\": \"trace\", \"config_";  // interrupted writer
  }
  auto back = read_records(path);
  CHECK(back.size() == 1);

  {
    std::ofstream out(path, std::ios::trunc);
    out << "garbage line\n";
    out << ResultRecord{"trace", "h", {{"i", 1}}, "1"}.to_json().dump() << "\n";
  }
  CHECK_THROWS_AS(read_records(path), ConfigError);
  std::remove(path.c_str());
}

TEST_CASE("csv output follows RFC 4180 quoting") {
  std::string csv = to_csv({"a", "b"}, {{"plain", "has,comma"},
                                        {"has\"quote", "multi\nline"}});
  CHECK(csv == "a,b\r\nplain,\"has,comma\"\r\n\"has\"\"quote\",\"multi\nline\"\r\n");
  CHECK_THROWS_AS(to_csv({"a", "b"}, {{"only-one"}}), std::invalid_argument);
}

TEST_CASE("svg rendering is deterministic and rejects unknown kinds") {
  ResultRecord r;
  r.op = "trace";
  r.config_hash = "h";
  r.payload = {
      {"kind", "trajectories"},
      {"window", 2.0},
      {"trajectories",
       {{{"closed", true},
         {"vertices", {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}}},
        {{"closed", false},
         {"vertices", {{-1.5, -1.5}, {1.5, 1.5}}}}}}};
  std::string a = render_svg(r);
  std::string b = render_svg(r);
  CHECK(a == b);
  CHECK(a.find("width=\"800\"") != std::string::npos);
  CHECK(a.find("<path") != std::string::npos);
  CHECK(a.find(" Z\"") != std::string::npos);

  ResultRecord bad = r;
  bad.payload["kind"] = "mystery";
  CHECK_THROWS_AS(render_svg(bad), UnrenderableRecordKind);
}

TEST_CASE("svg slice profile and zone map render") {
  ResultRecord prof;
  prof.payload = {{"kind", "slice_profile"},
                  {"entries",
                   {{{"t", 0.0}, {"c_minus", -0.4}, {"c_plus", 0.4},
                     {"stable", true}},
                    {{"t", 0.5}, {"c_minus", -0.3}, {"c_plus", 0.5},
                     {"stable", false}}}}};
  std::string s = render_svg(prof);
  CHECK(s.find("<rect") != std::string::npos);

  ResultRecord zones;
  zones.payload = {{"kind", "zone_map"},
                   {"samples",
                    {{{"dir", {0.0, 0.0, 1.0}}, {"zone", 0}},
                     {{"dir", {1.0, 0.0, 0.0}}, {"zone", 2}},
                     {{"dir", {0.0, 0.0, -1.0}}, {"zone", 1}}}}};
  std::string z = render_svg(zones);
  CHECK(z.find("<circle") != std::string::npos);
  CHECK(render_svg(zones) == z);
}
