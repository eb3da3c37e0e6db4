#include "ql/contour.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>

#include "ql/errors.hpp"

namespace ql {

namespace {

struct Segment {
  int64_t e0, e1;
};

// Bisection of f - level along the straight edge [a, b].
Eigen::Vector2d refine_crossing(
    const std::function<double(const Eigen::Vector2d&)>& f,
    const Eigen::Vector2d& a, const Eigen::Vector2d& b, double va, double vb,
    double level, double tol) {
  double fa = f(a) - level, fb = f(b) - level;
  if ((fa > 0) == (fb > 0)) {
    // exact values disagree with the grid signs (value within rounding of
    // the level); fall back to linear interpolation of the grid values
    double t = (level - va) / (vb - va);
    return a + t * (b - a);
  }
  Eigen::Vector2d lo = a, hi = b;
  for (int it = 0; it < 80; ++it) {
    Eigen::Vector2d mid = 0.5 * (lo + hi);
    double fm = f(mid) - level;
    if (std::abs(fm) < tol && (hi - lo).norm() < 1e-6) return mid;
    if ((fm > 0) == (fa > 0)) {
      lo = mid;
      fa = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double nudged(double v, double level) {
  double d = v - level;
  if (std::abs(d) < 1e-13) return 1e-13;
  return d;
}

// Emits the (edge, edge) segment pairs of one cell. Edge ids are the caller's.
// d00..d11 are nudged (value - level) at the corners; center is the sign
// datum for the ambiguous cases.
void cell_segments(double d00, double d10, double d01, double d11,
                   double center, int64_t ex0, int64_t ex1, int64_t ey0,
                   int64_t ey1, std::vector<Segment>& out) {
  bool s00 = d00 > 0, s10 = d10 > 0, s01 = d01 > 0, s11 = d11 > 0;
  int count = int(s00 != s10) + int(s01 != s11) + int(s00 != s01) + int(s10 != s11);
  if (count == 0) return;
  if (count == 2) {
    int64_t e[2];
    int k = 0;
    if (s00 != s10) e[k++] = ex0;
    if (s01 != s11) e[k++] = ex1;
    if (s00 != s01) e[k++] = ey0;
    if (s10 != s11) e[k++] = ey1;
    out.push_back({e[0], e[1]});
    return;
  }
  // count == 4: saddle cell; pair by the center sign
  bool sc = center > 0;
  if (sc == s00) {
    out.push_back({ex0, ey1});
    out.push_back({ex1, ey0});
  } else {
    out.push_back({ex0, ey0});
    out.push_back({ex1, ey1});
  }
}

struct ChainBuilder {
  std::map<int64_t, Eigen::Vector2d> vertex;  // edge id -> refined point
  std::vector<Segment> segments;

  // adjacency: edge id -> up to two neighbor edge ids
  std::vector<Polyline> link(bool torus) {
    std::map<int64_t, std::vector<int64_t>> adj;
    for (const auto& s : segments) {
      adj[s.e0].push_back(s.e1);
      adj[s.e1].push_back(s.e0);
    }
    std::map<int64_t, bool> used;
    std::vector<Polyline> out;

    auto walk = [&](int64_t start) {
      Polyline pl;
      int64_t prev = -1, cur = start;
      while (true) {
        used[cur] = true;
        Eigen::Vector2d p = vertex.at(cur);
        if (torus && !pl.pts.empty()) {
          // lift to the nearest image of the previous vertex
          for (int d = 0; d < 2; ++d)
            p[d] -= std::round(p[d] - pl.pts.back()[d]);
        }
        pl.pts.push_back(p);
        int64_t next = -1;
        for (int64_t nb : adj[cur])
          if (nb != prev && !(used.count(nb) && used[nb] && nb != start)) {
            next = nb;
            break;
          }
        if (next == -1) break;
        if (next == start) {
          // close the cycle; repeat the first vertex (lifted)
          Eigen::Vector2d q = vertex.at(start);
          if (torus)
            for (int d = 0; d < 2; ++d)
              q[d] -= std::round(q[d] - pl.pts.back()[d]);
          pl.pts.push_back(q);
          pl.closed = true;
          break;
        }
        prev = cur;
        cur = next;
      }
      return pl;
    };

    // open chains first (degree-1 ends exist only in the planar case)
    for (const auto& [e, nbs] : adj)
      if (nbs.size() == 1 && !used[e]) {
        Polyline pl = walk(e);
        pl.hit_boundary = true;
        out.push_back(std::move(pl));
      }
    for (const auto& [e, nbs] : adj)
      if (!used[e]) {
        Polyline pl = walk(e);
        out.push_back(std::move(pl));
      }
    return out;
  }
};

}  // namespace

std::vector<Polyline> contour_planar(
    const std::function<double(const Eigen::Vector2d&)>& f,
    const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& grad,
    const std::vector<double>& values, const Eigen::Vector2d& origin, double h,
    int count, double level, double refine_tol, bool critical_check) {
  if (static_cast<int64_t>(values.size()) !=
      static_cast<int64_t>(count) * count)
    throw std::invalid_argument("contour_planar: bad value grid size");
  auto node = [&](int i, int j) {
    return Eigen::Vector2d(origin[0] + i * h, origin[1] + j * h);
  };
  auto val = [&](int i, int j) {
    return values[static_cast<size_t>(i) * count + j];
  };
  // edge ids: ((i * count + j) << 1) | axis, axis 0 = +x, 1 = +y
  auto ex_id = [&](int i, int j) { return ((int64_t(i) * count + j) << 1); };
  auto ey_id = [&](int i, int j) { return ((int64_t(i) * count + j) << 1) | 1; };

  ChainBuilder cb;
  auto vertex_on = [&](int64_t id, int i, int j, int axis) {
    if (cb.vertex.count(id)) return;
    int i2 = i + (axis == 0 ? 1 : 0), j2 = j + (axis == 1 ? 1 : 0);
    cb.vertex[id] = refine_crossing(f, node(i, j), node(i2, j2), val(i, j),
                                    val(i2, j2), level, refine_tol);
  };

  for (int i = 0; i + 1 < count; ++i) {
    for (int j = 0; j + 1 < count; ++j) {
      double d00 = nudged(val(i, j), level), d10 = nudged(val(i + 1, j), level);
      double d01 = nudged(val(i, j + 1), level),
             d11 = nudged(val(i + 1, j + 1), level);
      bool any = ((d00 > 0) != (d10 > 0)) || ((d00 > 0) != (d01 > 0)) ||
                 ((d00 > 0) != (d11 > 0));
      if (!any) continue;
      if (critical_check) {
        Eigen::Vector2d c = node(i, j) + Eigen::Vector2d(h / 2, h / 2);
        for (const Eigen::Vector2d& p :
             {node(i, j), node(i + 1, j), node(i, j + 1), node(i + 1, j + 1), c}) {
          if (std::abs(f(p) - level) < 1e-6 && grad(p).norm() < 1e-6)
            throw NearCriticalLevel(
                "contour: saddle within tolerance of the traced level");
        }
      }
      double center = f(node(i, j) + Eigen::Vector2d(h / 2, h / 2)) - level;
      size_t before = cb.segments.size();
      cell_segments(d00, d10, d01, d11, center, ex_id(i, j), ex_id(i, j + 1),
                    ey_id(i, j), ey_id(i + 1, j), cb.segments);
      for (size_t s = before; s < cb.segments.size(); ++s) {
        for (int64_t id : {cb.segments[s].e0, cb.segments[s].e1}) {
          int axis = static_cast<int>(id & 1);
          int lin = static_cast<int>(id >> 1);
          vertex_on(id, lin / count, lin % count, axis);
        }
      }
    }
  }
  return cb.link(false);
}

std::vector<Polyline> contour_torus(
    const std::function<double(const Eigen::Vector2d&)>& f,
    const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& grad,
    const std::vector<double>& values, int n, double level, double refine_tol,
    bool critical_check) {
  if (static_cast<int64_t>(values.size()) != static_cast<int64_t>(n) * n)
    throw std::invalid_argument("contour_torus: bad value grid size");
  const double h = 1.0 / n;
  auto node = [&](int i, int j) {
    return Eigen::Vector2d(i * h, j * h);  // representative in [0, 1+h)
  };
  auto val = [&](int i, int j) {
    return values[static_cast<size_t>(i % n) * n + (j % n)];
  };
  auto ex_id = [&](int i, int j) {
    return ((int64_t(i % n) * n + (j % n)) << 1);
  };
  auto ey_id = [&](int i, int j) {
    return ((int64_t(i % n) * n + (j % n)) << 1) | 1;
  };

  ChainBuilder cb;
  auto vertex_on = [&](int64_t id, int i, int j, int axis) {
    if (cb.vertex.count(id)) return;
    int i2 = i + (axis == 0 ? 1 : 0), j2 = j + (axis == 1 ? 1 : 0);
    Eigen::Vector2d p = refine_crossing(f, node(i, j), node(i2, j2), val(i, j),
                                        val(i2, j2), level, refine_tol);
    // canonical representative in [0, 1)
    p[0] -= std::floor(p[0]);
    p[1] -= std::floor(p[1]);
    cb.vertex[id] = p;
  };

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double d00 = nudged(val(i, j), level), d10 = nudged(val(i + 1, j), level);
      double d01 = nudged(val(i, j + 1), level),
             d11 = nudged(val(i + 1, j + 1), level);
      bool any = ((d00 > 0) != (d10 > 0)) || ((d00 > 0) != (d01 > 0)) ||
                 ((d00 > 0) != (d11 > 0));
      if (!any) continue;
      if (critical_check) {
        Eigen::Vector2d c = node(i, j) + Eigen::Vector2d(h / 2, h / 2);
        for (const Eigen::Vector2d& p :
             {node(i, j), node(i + 1, j), node(i, j + 1), node(i + 1, j + 1), c}) {
          if (std::abs(f(p) - level) < 1e-6 && grad(p).norm() < 1e-6)
            throw NearCriticalLevel(
                "contour: saddle within tolerance of the traced level");
        }
      }
      double center = f(node(i, j) + Eigen::Vector2d(h / 2, h / 2)) - level;
      size_t before = cb.segments.size();
      cell_segments(d00, d10, d01, d11, center, ex_id(i, j), ex_id(i, j + 1),
                    ey_id(i, j), ey_id(i + 1, j), cb.segments);
      for (size_t s = before; s < cb.segments.size(); ++s) {
        for (int64_t id : {cb.segments[s].e0, cb.segments[s].e1}) {
          int axis = static_cast<int>(id & 1);
          int lin = static_cast<int>(id >> 1);
          // recover a representative cell for the edge
          int ei = lin / n, ej = lin % n;
          vertex_on(id, ei, ej, axis);
        }
      }
    }
  }
  return cb.link(true);
}

}  // namespace ql
