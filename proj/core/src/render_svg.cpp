#include "ql/render_svg.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "ql/errors.hpp"

namespace ql {

namespace {

using nlohmann::json;

const char* kPalette[] = {"#1b6ca8", "#c0392b", "#27ae60", "#8e44ad",
                          "#d35400", "#16a085", "#7f8c8d", "#2c3e50",
                          "#f39c12", "#2980b9", "#a04000", "#1e8449"};
constexpr int kPaletteSize = 12;
constexpr double kCanvas = 800.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string header() {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" "
         "height=\"800\" viewBox=\"0 0 800 800\">\n"
         "<rect width=\"800\" height=\"800\" fill=\"#ffffff\"/>\n";
}

std::string render_trajectories(const json& p) {
  double R = p.value("window", 1.0);
  if (R <= 0) R = 1.0;
  auto X = [&](double x) { return (x + R) / (2 * R) * kCanvas; };
  auto Y = [&](double y) { return kCanvas - (y + R) / (2 * R) * kCanvas; };
  std::ostringstream os;
  os << header();
  int idx = 0;
  for (const auto& t : p.value("trajectories", json::array())) {
    const auto& verts = t.value("vertices", json::array());
    if (verts.size() < 2) continue;
    os << "<path fill=\"none\" stroke=\"" << kPalette[idx % kPaletteSize]
       << "\" stroke-width=\"1.5\" d=\"";
    bool first = true;
    for (const auto& v : verts) {
      os << (first ? "M" : " L") << num(X(v.at(0).get<double>())) << " "
         << num(Y(v.at(1).get<double>()));
      first = false;
    }
    if (t.value("closed", false)) os << " Z";
    os << "\"/>\n";
    ++idx;
  }
  os << "</svg>\n";
  return os.str();
}

std::string render_slice_profile(const json& p) {
  const auto& entries = p.value("entries", json::array());
  if (entries.empty())
    throw UnrenderableRecordKind("render: slice profile has no entries");
  double lo = 1e300, hi = -1e300;
  for (const auto& e : entries) {
    if (e.value("empty", false)) continue;
    lo = std::min(lo, e.value("c_minus", 0.0));
    hi = std::max(hi, e.value("c_plus", 0.0));
  }
  if (hi <= lo) {
    lo -= 1.0;
    hi += 1.0;
  }
  double pad = 0.1 * (hi - lo);
  lo -= pad;
  hi += pad;
  auto X = [&](double t) { return 40.0 + t * (kCanvas - 80.0); };
  auto Y = [&](double c) {
    return kCanvas - 40.0 - (c - lo) / (hi - lo) * (kCanvas - 80.0);
  };
  std::ostringstream os;
  os << header();
  // stability zones shaded behind the curves
  for (size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (!e.value("stable", false)) continue;
    double t0 = e.value("t", 0.0);
    double t1 = i + 1 < entries.size() ? entries[i + 1].value("t", 1.0) : 1.0;
    os << "<rect x=\"" << num(X(t0)) << "\" y=\"40\" width=\""
       << num(X(t1) - X(t0)) << "\" height=\"" << num(kCanvas - 80.0)
       << "\" fill=\"#e8f4e8\"/>\n";
  }
  for (const char* which : {"c_minus", "c_plus"}) {
    os << "<path fill=\"none\" stroke=\""
       << (std::string(which) == "c_minus" ? kPalette[0] : kPalette[1])
       << "\" stroke-width=\"2\" d=\"";
    bool first = true;
    for (const auto& e : entries) {
      if (e.value("empty", false)) {
        first = true;
        continue;
      }
      os << (first ? "M" : " L") << num(X(e.value("t", 0.0))) << " "
         << num(Y(e.value(which, 0.0)));
      first = false;
    }
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string render_zone_map(const json& p) {
  std::ostringstream os;
  os << header();
  // two orthographic hemisphere charts, northern left, southern right
  os << "<circle cx=\"200\" cy=\"400\" r=\"180\" fill=\"none\" "
        "stroke=\"#000000\"/>\n"
     << "<circle cx=\"600\" cy=\"400\" r=\"180\" fill=\"none\" "
        "stroke=\"#000000\"/>\n";
  for (const auto& s : p.value("samples", json::array())) {
    const auto& d = s.at("dir");
    double x = d.at(0).get<double>(), y = d.at(1).get<double>(),
           z = d.at(2).get<double>();
    double cx = z >= 0 ? 200.0 : 600.0;
    int zone = s.value("zone", -1);
    const char* color = zone >= 0 ? kPalette[zone % kPaletteSize] : "#cccccc";
    os << "<circle cx=\"" << num(cx + 180.0 * x) << "\" cy=\""
       << num(400.0 - 180.0 * y) << "\" r=\"2\" fill=\"" << color << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace

std::string render_svg(const ResultRecord& record) {
  const std::string kind = record.payload.value("kind", "");
  if (kind == "trajectories") return render_trajectories(record.payload);
  if (kind == "slice_profile") return render_slice_profile(record.payload);
  if (kind == "zone_map") return render_zone_map(record.payload);
  throw UnrenderableRecordKind("render: cannot render payload kind \"" + kind +
                               "\"");
}

}  // namespace ql
