#include "ql/surface.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>

#include "ql/errors.hpp"

namespace ql {

namespace {

double nudged(double v, double level) {
  double d = v - level;
  if (std::abs(d) < 1e-13) return 1e-13;
  return d;
}

struct CellCrossing {
  int global_vertex;
  Eigen::Vector3d local;  // cell-frame position (may exceed [0,1)^3)
};

// Pairs the crossings of one cube face, marching-squares style. Edge slots
// are face-local: ex0, ex1, ey0, ey1 as in the 2D engine. `center` is the
// nudged face-center value, shared verbatim between the two adjacent cells.
void face_segments(double d00, double d10, double d01, double d11,
                   double center, int64_t ex0, int64_t ex1, int64_t ey0,
                   int64_t ey1, std::vector<std::pair<int64_t, int64_t>>& out) {
  bool s00 = d00 > 0, s10 = d10 > 0, s01 = d01 > 0, s11 = d11 > 0;
  int count =
      int(s00 != s10) + int(s01 != s11) + int(s00 != s01) + int(s10 != s11);
  if (count == 0) return;
  if (count == 2) {
    int64_t e[2];
    int k = 0;
    if (s00 != s10) e[k++] = ex0;
    if (s01 != s11) e[k++] = ex1;
    if (s00 != s01) e[k++] = ey0;
    if (s10 != s11) e[k++] = ey1;
    out.emplace_back(e[0], e[1]);
    return;
  }
  bool sc = center > 0;
  if (sc == s00) {
    out.emplace_back(ex0, ey1);
    out.emplace_back(ex1, ey0);
  } else {
    out.emplace_back(ex0, ey0);
    out.emplace_back(ex1, ey1);
  }
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

std::vector<double> critical_values(const TrigSeries& f, int resolution) {
  if (f.dimension() != 3)
    throw std::invalid_argument("critical_values: need a series on T^3");
  const int N = resolution;
  const double h = 1.0 / N;
  // gradient samples on the grid
  std::vector<Eigen::Vector3d> g(static_cast<size_t>(N) * N * N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k)
        g[(static_cast<size_t>(i) * N + j) * N + k] =
            f.gradient(Eigen::Vector3d(i * h, j * h, k * h));

  auto gi = [&](int i, int j, int k) -> const Eigen::Vector3d& {
    return g[(static_cast<size_t>((i % N + N) % N) * N + (j % N + N) % N) * N +
             (k % N + N) % N];
  };

  std::vector<Eigen::Vector3d> points;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) {
        // each gradient component must change sign over the cell corners
        bool cand = true;
        for (int d = 0; d < 3 && cand; ++d) {
          bool pos = false, neg = false;
          for (int ci = 0; ci < 2; ++ci)
            for (int cj = 0; cj < 2; ++cj)
              for (int ck = 0; ck < 2; ++ck) {
                double v = gi(i + ci, j + cj, k + ck)[d];
                (v > 0 ? pos : neg) = true;
              }
          cand = pos && neg;
        }
        if (!cand) continue;
        Eigen::Vector3d p((i + 0.5) * h, (j + 0.5) * h, (k + 0.5) * h);
        bool ok = false;
        for (int it = 0; it < 60; ++it) {
          Eigen::Vector3d gr = f.gradient(p);
          if (gr.norm() < 1e-11) {
            ok = true;
            break;
          }
          Eigen::Matrix3d H = f.hessian(p);
          Eigen::Vector3d step = H.fullPivLu().solve(gr);
          if (!step.allFinite() || step.norm() > 2 * h) break;
          p -= step;
        }
        if (!ok) continue;
        for (int d = 0; d < 3; ++d) p[d] -= std::floor(p[d]);
        bool dup = false;
        for (const auto& q : points)
          if (torus_diff(p, q).norm() < 1e-6) {
            dup = true;
            break;
          }
        if (!dup) points.push_back(p);
      }

  std::vector<double> values;
  for (const auto& p : points) {
    double v = f.evaluate(p);
    bool dup = false;
    for (double w : values)
      if (std::abs(v - w) < 1e-9) {
        dup = true;
        break;
      }
    if (!dup) values.push_back(v);
  }
  std::sort(values.begin(), values.end());
  return values;
}

LevelSurface extract_level_surface(const TrigSeries& f, double c,
                                   int resolution,
                                   const std::vector<double>* known_critical) {
  if (f.dimension() != 3)
    throw std::invalid_argument("extract_level_surface: need a series on T^3");
  if (resolution < 8)
    throw std::invalid_argument("extract_level_surface: resolution too small");

  {
    std::vector<double> scratch;
    if (!known_critical) {
      scratch = critical_values(f, std::max(16, resolution));
      known_critical = &scratch;
    }
    const auto& crit = *known_critical;
    double nearest = std::numeric_limits<double>::infinity();
    for (double v : crit)
      if (std::abs(v - c) < std::abs(nearest - c)) nearest = v;
    if (std::abs(nearest - c) < 1e-6)
      throw CriticalValue("extract_level_surface: level within 1e-6 of a "
                          "critical value",
                          nearest);
  }

  const int N = resolution;
  const double h = 1.0 / N;
  std::vector<double> grid(static_cast<size_t>(N) * N * N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k)
        grid[(static_cast<size_t>(i) * N + j) * N + k] =
            f.evaluate(Eigen::Vector3d(i * h, j * h, k * h));
  auto val = [&](int i, int j, int k) {
    return grid[(static_cast<size_t>((i % N + N) % N) * N + (j % N + N) % N) *
                    N +
                (k % N + N) % N];
  };
  auto edge_id = [&](int i, int j, int k, int axis) -> int64_t {
    int64_t lin = (static_cast<int64_t>((i % N + N) % N) * N +
                   (j % N + N) % N) *
                      N +
                  (k % N + N) % N;
    return lin * 3 + axis;
  };

  LevelSurface M;
  M.level = c;
  M.resolution = N;
  std::map<int64_t, int> edge_vertex;

  auto get_vertex = [&](int i, int j, int k, int axis) -> int {
    int64_t id = edge_id(i, j, k, axis);
    auto it = edge_vertex.find(id);
    if (it != edge_vertex.end()) return it->second;
    Eigen::Vector3d a(i * h, j * h, k * h), b = a;
    b[axis] += h;
    double fa = f.evaluate(a) - c, fb = f.evaluate(b) - c;
    Eigen::Vector3d lo = a, hi = b;
    if ((fa > 0) == (fb > 0)) {
      // grid nudging put the crossing below value resolution; midpoint
      lo = hi = 0.5 * (a + b);
    } else {
      for (int it2 = 0; it2 < 80; ++it2) {
        Eigen::Vector3d mid = 0.5 * (lo + hi);
        double fm = f.evaluate(mid) - c;
        if (std::abs(fm) < 1e-8 && (hi - lo).norm() < 1e-6) {
          lo = hi = mid;
          break;
        }
        if ((fm > 0) == (fa > 0)) {
          lo = mid;
          fa = fm;
        } else {
          hi = mid;
        }
      }
    }
    Eigen::Vector3d p = 0.5 * (lo + hi);
    for (int d = 0; d < 3; ++d) p[d] -= std::floor(p[d]);
    int idx = static_cast<int>(M.vertices.size());
    M.vertices.push_back(p);
    edge_vertex.emplace(id, idx);
    return idx;
  };

  // cell-frame corner offsets
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) {
        double d[2][2][2];
        bool pos = false, neg = false;
        for (int ci = 0; ci < 2; ++ci)
          for (int cj = 0; cj < 2; ++cj)
            for (int ck = 0; ck < 2; ++ck) {
              d[ci][cj][ck] = nudged(val(i + ci, j + cj, k + ck), c);
              (d[ci][cj][ck] > 0 ? pos : neg) = true;
            }
        if (!(pos && neg)) continue;

        // local edge key: axis*4 + 2*u + v, where (u, v) index the two
        // transverse coordinates in increasing-axis order
        auto local_edge = [&](int axis, int u, int v) { return axis * 4 + 2 * u + v; };
        std::vector<std::pair<int64_t, int64_t>> segs;
        // faces normal to `n_ax`, at side s (0 or 1); in-face axes a1 < a2
        for (int n_ax = 0; n_ax < 3; ++n_ax) {
          int a1 = (n_ax + 1) % 3, a2 = (n_ax + 2) % 3;
          if (a1 > a2) std::swap(a1, a2);
          for (int s = 0; s < 2; ++s) {
            auto corner = [&](int u, int v) {
              int idx[3];
              idx[n_ax] = s;
              idx[a1] = u;
              idx[a2] = v;
              return d[idx[0]][idx[1]][idx[2]];
            };
            // face edge along a1 at v fixed: local edge (a1, u_along? ...)
            auto fe_a1 = [&](int v) {
              int idx[3];
              idx[n_ax] = s;
              idx[a1] = 0;
              idx[a2] = v;
              // transverse coords of an a1-edge, in increasing axis order
              int t1 = (a1 == 0) ? 1 : 0, t2 = (a1 == 2) ? 1 : 2;
              return local_edge(a1, idx[t1], idx[t2]);
            };
            auto fe_a2 = [&](int u) {
              int idx[3];
              idx[n_ax] = s;
              idx[a2] = 0;
              idx[a1] = u;
              int t1 = (a2 == 0) ? 1 : 0, t2 = (a2 == 2) ? 1 : 2;
              return local_edge(a2, idx[t1], idx[t2]);
            };
            double d00 = corner(0, 0), d10 = corner(1, 0), d01 = corner(0, 1),
                   d11 = corner(1, 1);
            int cnt = int((d00 > 0) != (d10 > 0)) +
                      int((d01 > 0) != (d11 > 0)) +
                      int((d00 > 0) != (d01 > 0)) + int((d10 > 0) != (d11 > 0));
            double center = 0.0;
            if (cnt == 4) {
              Eigen::Vector3d fc((i + 0.5) * h, (j + 0.5) * h, (k + 0.5) * h);
              fc[n_ax] = ((n_ax == 0 ? i : n_ax == 1 ? j : k) + s) * h;
              center = nudged(f.evaluate(fc), c);
            }
            face_segments(d00, d10, d01, d11, center, fe_a1(0), fe_a1(1),
                          fe_a2(0), fe_a2(1), segs);
          }
        }
        if (segs.empty()) continue;

        // resolve local edges to global vertices and cell-frame positions
        std::map<int64_t, CellCrossing> cross;
        auto resolve = [&](int64_t le) {
          if (cross.count(le)) return;
          int axis = static_cast<int>(le / 4);
          int u = static_cast<int>((le / 2) % 2), v = static_cast<int>(le % 2);
          int off[3];
          off[axis] = 0;
          int t1 = (axis == 0) ? 1 : 0, t2 = (axis == 2) ? 1 : 2;
          off[t1] = u;
          off[t2] = v;
          int gv = get_vertex(i + off[0], j + off[1], k + off[2], axis);
          Eigen::Vector3d base((i + off[0]) * h, (j + off[1]) * h,
                               (k + off[2]) * h);
          // lift the canonical vertex into the cell frame
          Eigen::Vector3d p = base + torus_diff(M.vertices[gv], base);
          cross[le] = {gv, p};
        };
        std::map<int64_t, std::vector<int64_t>> adj;
        for (auto& s2 : segs) {
          resolve(s2.first);
          resolve(s2.second);
          adj[s2.first].push_back(s2.second);
          adj[s2.second].push_back(s2.first);
        }
        // every crossing lies on exactly two faces of the cell
        for (auto& [le, nb] : adj)
          if (nb.size() != 2)
            throw std::logic_error("extract_level_surface: open cell loop");

        std::set<int64_t> used;
        for (auto& [start, nb0] : adj) {
          if (used.count(start)) continue;
          std::vector<int64_t> loop;
          int64_t prev = -1, cur = start;
          while (true) {
            used.insert(cur);
            loop.push_back(cur);
            int64_t next = (adj[cur][0] != prev) ? adj[cur][0] : adj[cur][1];
            if (next == start) break;
            prev = cur;
            cur = next;
          }
          if (loop.size() < 3) continue;
          // orientation: Newell normal vs gradient at the loop centroid
          Eigen::Vector3d centroid = Eigen::Vector3d::Zero(),
                          normal = Eigen::Vector3d::Zero();
          for (auto le : loop) centroid += cross[le].local;
          centroid /= double(loop.size());
          for (size_t q = 0; q < loop.size(); ++q) {
            const Eigen::Vector3d& a2 = cross[loop[q]].local;
            const Eigen::Vector3d& b2 = cross[loop[(q + 1) % loop.size()]].local;
            normal += (a2 - centroid).cross(b2 - centroid);
          }
          if (normal.dot(f.gradient(centroid)) < 0)
            std::reverse(loop.begin(), loop.end());
          for (size_t q = 1; q + 1 < loop.size(); ++q)
            M.triangles.emplace_back(cross[loop[0]].global_vertex,
                                     cross[loop[q]].global_vertex,
                                     cross[loop[q + 1]].global_vertex);
        }
      }

  // connectivity over shared undirected vertex pairs + watertightness
  std::map<std::pair<int, int>, std::vector<int>> edge_tris;
  for (size_t t = 0; t < M.triangles.size(); ++t)
    for (int e = 0; e < 3; ++e) {
      int a = M.triangles[t][e], b = M.triangles[t][(e + 1) % 3];
      edge_tris[{std::min(a, b), std::max(a, b)}].push_back(
          static_cast<int>(t));
    }
  for (auto& [e, ts] : edge_tris)
    if (ts.size() != 2)
      throw std::logic_error("extract_level_surface: surface not watertight");

  UnionFind uf(static_cast<int>(M.triangles.size()));
  for (auto& [e, ts] : edge_tris) uf.unite(ts[0], ts[1]);
  std::map<int, int> root_to_comp;
  M.tri_component.resize(M.triangles.size());
  for (size_t t = 0; t < M.triangles.size(); ++t) {
    int r = uf.find(static_cast<int>(t));
    auto it = root_to_comp.find(r);
    if (it == root_to_comp.end()) {
      it = root_to_comp.emplace(r, static_cast<int>(M.components.size())).first;
      M.components.emplace_back();
    }
    M.tri_component[t] = it->second;
    M.components[it->second].triangles.push_back(static_cast<int>(t));
  }

  // Euler characteristic, genus, homology, H_1-image rank per component
  for (auto& comp : M.components) {
    std::set<int> vs;
    std::set<std::pair<int, int>> es;
    for (int t : comp.triangles)
      for (int e = 0; e < 3; ++e) {
        int a = M.triangles[t][e], b = M.triangles[t][(e + 1) % 3];
        vs.insert(a);
        es.insert({std::min(a, b), std::max(a, b)});
      }
    comp.chi = static_cast<int>(vs.size()) - static_cast<int>(es.size()) +
               static_cast<int>(comp.triangles.size());
    if (comp.chi % 2 != 0)
      throw std::logic_error("extract_level_surface: odd Euler characteristic");
    comp.genus = (2 - comp.chi) / 2;
    comp.homology = homology_class(M, comp);

    // spanning-tree lift; fundamental cycles give the H_1 image
    std::map<int, Eigen::Vector3d> lift;
    std::vector<int> stack;
    int root = *vs.begin();
    lift[root] = M.vertices[root];
    stack.push_back(root);
    std::map<int, std::vector<int>> vadj;
    for (const auto& e : es) {
      vadj[e.first].push_back(e.second);
      vadj[e.second].push_back(e.first);
    }
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v : vadj[u])
        if (!lift.count(v)) {
          lift[v] = lift[u] + torus_diff(M.vertices[v], M.vertices[u]);
          stack.push_back(v);
        }
    }
    Eigen::MatrixXd cyc(0, 3);
    for (const auto& e : es) {
      Eigen::Vector3d w =
          lift[e.first] + torus_diff(M.vertices[e.second], M.vertices[e.first]) -
          lift[e.second];
      Eigen::Vector3d r = w;
      for (int dd = 0; dd < 3; ++dd) r[dd] = std::round(r[dd]);
      if ((w - r).norm() > 1e-6)
        throw std::logic_error("extract_level_surface: non-integral cycle");
      if (r.norm() < 0.5) continue;
      cyc.conservativeResize(cyc.rows() + 1, 3);
      cyc.row(cyc.rows() - 1) = r.transpose();
      if (cyc.rows() >= 16) break;  // rank is at most 3
    }
    comp.rank = cyc.rows() == 0
                    ? 0
                    : static_cast<int>(
                          Eigen::FullPivLU<Eigen::MatrixXd>(cyc).rank());
  }
  return M;
}

Eigen::Vector3i homology_class(const LevelSurface& M,
                               const SurfaceComponent& comp) {
  Eigen::Vector3d area = Eigen::Vector3d::Zero();
  for (int t : comp.triangles) {
    const Eigen::Vector3d& a = M.vertices[M.triangles[t][0]];
    Eigen::Vector3d b = a + torus_diff(M.vertices[M.triangles[t][1]], a);
    Eigen::Vector3d c = a + torus_diff(M.vertices[M.triangles[t][2]], a);
    area += 0.5 * (b - a).cross(c - a);
  }
  Eigen::Vector3i cls;
  double resid = 0.0;
  for (int d = 0; d < 3; ++d) {
    cls[d] = static_cast<int>(std::lround(area[d]));
    resid = std::max(resid, std::abs(area[d] - cls[d]));
  }
  if (resid >= 1e-3)
    throw NonIntegralClass("homology_class: projected areas fail to round");
  return cls;
}

}  // namespace ql
