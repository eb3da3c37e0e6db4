#include "ql/foliation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "ql/errors.hpp"

namespace ql {

namespace {

// Newton correction back onto {f = c, B.x = h0}; moves within span(grad f, B).
bool project_leaf_point(const TrigSeries& f, const Eigen::Vector3d& B, double c,
                        double h0, Eigen::Vector3d& x) {
  for (int it = 0; it < 8; ++it) {
    Eigen::Vector3d g = f.gradient3(x);
    double r1 = f.evaluate3(x) - c, r2 = B.dot(x) - h0;
    if (std::abs(r1) < 1e-11 && std::abs(r2) < 1e-12) return true;
    Eigen::Matrix2d A;
    A << g.dot(g), g.dot(B), B.dot(g), B.dot(B);
    Eigen::Vector2d rhs(-r1, -r2);
    Eigen::Vector2d ab = A.fullPivLu().solve(rhs);
    if (!ab.allFinite()) return false;
    x += ab[0] * g + ab[1] * B;
  }
  return std::abs(f.evaluate3(x) - c) < 1e-9;
}

Eigen::Vector3d leaf_dir(const TrigSeries& f, const Eigen::Vector3d& B,
                         const Eigen::Vector3d& x) {
  Eigen::Vector3d g = f.gradient3(x);
  Eigen::Vector3d w = g.cross(B);
  double n = w.norm();
  return n > 1e-14 ? Eigen::Vector3d(w / n) : Eigen::Vector3d::Zero();
}

Eigen::Vector3d canonical(Eigen::Vector3d p) {
  for (int d = 0; d < 3; ++d) p[d] -= std::floor(p[d]);
  return p;
}

double hessian_bound(const TrigSeries& f) {
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  double b = 0.0;
  for (const auto& t : f.terms()) {
    double m2 = 0.0;
    for (int v : t.freq) m2 += double(v) * v;
    b += std::abs(t.coeff) * kTwoPi * kTwoPi * m2;
  }
  return b;
}

}  // namespace

std::vector<Eigen::Vector3d> trace_surface_trajectory(
    const TrigSeries& f, const Eigen::Vector3d& B, const Eigen::Vector3d& seed,
    double c, double max_length, double step) {
  std::vector<Eigen::Vector3d> out;
  Eigen::Vector3d x = seed;
  double h0 = B.dot(seed);
  if (!project_leaf_point(f, B, c, h0, x)) return out;
  h0 = B.dot(x);
  out.push_back(x);
  double len = 0.0;
  long iters = 0;
  const long max_iters = 4 * static_cast<long>(max_length / step) + 100;
  while (len < max_length && ++iters < max_iters) {
    // RK4 on the unit surface field
    Eigen::Vector3d k1 = leaf_dir(f, B, x);
    if (k1.isZero()) break;
    Eigen::Vector3d k2 = leaf_dir(f, B, x + 0.5 * step * k1);
    Eigen::Vector3d k3 = leaf_dir(f, B, x + 0.5 * step * k2);
    Eigen::Vector3d k4 = leaf_dir(f, B, x + step * k3);
    Eigen::Vector3d nx = x + step / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    if (!project_leaf_point(f, B, c, h0, nx)) break;
    len += (nx - x).norm();
    x = nx;
    out.push_back(x);
  }
  return out;
}

FoliationSingularities foliation_singularities(const TrigSeries& f,
                                               const LevelSurface& M,
                                               const Eigen::Vector3d& B) {
  FoliationSingularities out;
  const double c = M.level;
  // orthonormal complement of B
  Eigen::Vector3d bu = B.normalized();
  Eigen::Vector3d u = bu.unitOrthogonal();
  Eigen::Vector3d v = bu.cross(u);

  const double h = 1.0 / M.resolution;
  const double kappa = 5.0 * h * hessian_bound(f);

  // candidate triangles: both transverse gradient components small somewhere
  std::vector<Eigen::Vector3d> found;
  for (const auto& tri : M.triangles) {
    double m1 = 1e18, m2 = 1e18;
    Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
    const Eigen::Vector3d& a = M.vertices[tri[0]];
    for (int e = 0; e < 3; ++e) {
      Eigen::Vector3d p = a + torus_diff(M.vertices[tri[e]], a);
      centroid += p / 3.0;
      Eigen::Vector3d g = f.gradient3(p);
      m1 = std::min(m1, std::abs(u.dot(g)));
      m2 = std::min(m2, std::abs(v.dot(g)));
    }
    if (m1 > kappa || m2 > kappa) continue;
    // Newton on (f - c, u.grad f, v.grad f)
    Eigen::Vector3d p = centroid;
    bool ok = false;
    for (int it = 0; it < 60; ++it) {
      Eigen::Vector3d g = f.gradient3(p);
      Eigen::Vector3d F(f.evaluate3(p) - c, u.dot(g), v.dot(g));
      if (F.norm() < 1e-11) {
        ok = true;
        break;
      }
      Eigen::Matrix3d H = f.hessian3(p);
      Eigen::Matrix3d J;
      J.row(0) = g.transpose();
      J.row(1) = u.transpose() * H;
      J.row(2) = v.transpose() * H;
      Eigen::Vector3d stepv = J.fullPivLu().solve(F);
      if (!stepv.allFinite() || stepv.norm() > 4 * h) break;
      p -= stepv;
    }
    if (!ok) continue;
    p = canonical(p);
    bool dup = false;
    for (const auto& q : found)
      if (torus_diff(p, q).norm() < 1e-6) {
        dup = true;
        break;
      }
    if (dup) continue;
    found.push_back(p);

    FoliationSingularity s;
    s.point = p;
    s.height = B.dot(p);
    // restricted Hessian of the height on M: -lambda * t_i^T H t_j
    Eigen::Vector3d g = f.gradient3(p);
    double lambda = B.dot(g) / g.squaredNorm();
    Eigen::Vector3d n = g.normalized();
    Eigen::Vector3d t1 = n.unitOrthogonal(), t2 = n.cross(t1);
    Eigen::Matrix3d H = f.hessian3(p);
    Eigen::Matrix2d M2;
    M2 << t1.dot(H * t1), t1.dot(H * t2), t2.dot(H * t1), t2.dot(H * t2);
    M2 *= -lambda;
    double det = M2.determinant();
    if (std::abs(det) < 1e-9)
      throw DegenerateSingularity(
          "foliation_singularities: restricted Hessian nearly singular");
    s.is_saddle = det < 0;
    // nearest surface vertex gives the component
    double best = 1e18;
    for (size_t t = 0; t < M.triangles.size(); ++t) {
      double d = torus_diff(M.vertices[M.triangles[t][0]], p).norm();
      if (d < best) {
        best = d;
        s.component = M.tri_component[t];
      }
    }
    out.points.push_back(std::move(s));
  }

  // homoclinic cycles: follow the flow from each saddle's null rays
  for (size_t si = 0; si < out.points.size(); ++si) {
    const auto& s = out.points[si];
    if (!s.is_saddle) continue;
    Eigen::Vector3d g = f.gradient3(s.point);
    double lambda = B.dot(g) / g.squaredNorm();
    Eigen::Vector3d n = g.normalized();
    Eigen::Vector3d t1 = n.unitOrthogonal(), t2 = n.cross(t1);
    Eigen::Matrix3d H = f.hessian3(s.point);
    Eigen::Matrix2d M2;
    M2 << t1.dot(H * t1), t1.dot(H * t2), t2.dot(H * t1), t2.dot(H * t2);
    M2 *= -lambda;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(M2);
    double l1 = es.eigenvalues()[1], l2 = es.eigenvalues()[0];  // l1 > 0 > l2
    Eigen::Vector2d e1 = es.eigenvectors().col(1), e2 = es.eigenvectors().col(0);
    std::vector<std::vector<Eigen::Vector3d>> loops;
    for (int sgn1 : {-1, 1})
      for (int sgn2 : {-1, 1}) {
        Eigen::Vector2d xi =
            (sgn1 * std::sqrt(-l2) * e1 + sgn2 * std::sqrt(l1) * e2).normalized();
        Eigen::Vector3d dir = xi[0] * t1 + xi[1] * t2;
        Eigen::Vector3d start = s.point + 1e-4 * dir;
        if (!project_leaf_point(f, B, M.level, B.dot(s.point), start)) continue;
        // integrate forward; declare return when we re-enter a saddle ball
        std::vector<Eigen::Vector3d> path{start};
        Eigen::Vector3d x = start;
        const double step = 0.004, ret_r = 1.5e-3;
        double len = 0.0;
        int hit = -1;
        long iters = 0;
        const long max_iters = 4 * static_cast<long>(64.0 / step) + 100;
        while (len < 64.0 && ++iters < max_iters) {
          Eigen::Vector3d k1 = leaf_dir(f, B, x);
          if (k1.isZero()) break;
          Eigen::Vector3d k2 = leaf_dir(f, B, x + 0.5 * step * k1);
          Eigen::Vector3d k3 = leaf_dir(f, B, x + 0.5 * step * k2);
          Eigen::Vector3d k4 = leaf_dir(f, B, x + step * k3);
          Eigen::Vector3d nx = x + step / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
          if (!project_leaf_point(f, B, M.level, B.dot(start), nx)) break;
          double advance = (nx - x).norm();
          len += advance;
          x = nx;
          path.push_back(x);
          if (advance < 0.05 * step && len > 20 * step) {
            // stalled on a stable separatrix: the leaf limits onto a saddle
            double bd = 1e18;
            int bj = -1;
            for (size_t sj = 0; sj < out.points.size(); ++sj) {
              if (!out.points[sj].is_saddle) continue;
              double d = torus_diff(canonical(x), out.points[sj].point).norm();
              if (d < bd) {
                bd = d;
                bj = static_cast<int>(sj);
              }
            }
            if (bd < 0.05) hit = bj;
            break;
          }
          if (len > 20 * step) {
            for (size_t sj = 0; sj < out.points.size(); ++sj) {
              if (!out.points[sj].is_saddle) continue;
              if (torus_diff(canonical(x), out.points[sj].point).norm() < ret_r) {
                hit = static_cast<int>(sj);
                break;
              }
            }
            if (hit >= 0) break;
          }
        }
        if (hit < 0) {
          out.nonreturning.push_back(static_cast<int>(si));
          continue;
        }
        if (hit != static_cast<int>(si)) {
          out.saddle_to_saddle = true;
          continue;
        }
        loops.push_back(std::move(path));
      }
    // the four rays trace each homoclinic loop twice; deduplicate by midpoint
    for (auto& loop : loops) {
      const Eigen::Vector3d mid = canonical(loop[loop.size() / 2]);
      bool dup = false;
      for (const auto& cnx : out.connections) {
        if (cnx.saddle != static_cast<int>(si)) continue;
        for (size_t q = 0; q < cnx.cycle.size(); q += 4)
          if (torus_diff(canonical(cnx.cycle[q]), mid).norm() < 3e-3) {
            dup = true;
            break;
          }
        if (dup) break;
      }
      if (dup) continue;
      SaddleConnection cnx;
      cnx.saddle = static_cast<int>(si);
      double h0 = B.dot(s.point), spread = 0.0;
      for (const auto& p : loop)
        spread = std::max(spread, std::abs(B.dot(p) - B.dot(loop.front())));
      (void)h0;
      cnx.height_spread = spread;
      cnx.cycle = std::move(loop);
      out.connections.push_back(std::move(cnx));
    }
  }
  return out;
}

namespace {

// spatial hash over T^3 with cubic buckets
struct TorusHash {
  double cell;
  int n;
  std::map<int64_t, std::vector<Eigen::Vector3d>> buckets;
  explicit TorusHash(double cell_size)
      : cell(cell_size), n(std::max(1, static_cast<int>(1.0 / cell_size))) {
    cell = 1.0 / n;
  }
  int64_t key(const Eigen::Vector3d& p) const {
    int i = static_cast<int>(std::floor(p[0] / cell)) % n;
    int j = static_cast<int>(std::floor(p[1] / cell)) % n;
    int k = static_cast<int>(std::floor(p[2] / cell)) % n;
    i = (i + n) % n;
    j = (j + n) % n;
    k = (k + n) % n;
    return (static_cast<int64_t>(i) * n + j) * n + k;
  }
  void insert(const Eigen::Vector3d& p) { buckets[key(p)].push_back(p); }
  double min_dist(const Eigen::Vector3d& p, double cap) const {
    double best = cap;
    int ci = static_cast<int>(std::floor(p[0] / cell));
    int cj = static_cast<int>(std::floor(p[1] / cell));
    int ck = static_cast<int>(std::floor(p[2] / cell));
    for (int di = -1; di <= 1; ++di)
      for (int dj = -1; dj <= 1; ++dj)
        for (int dk = -1; dk <= 1; ++dk) {
          int i = ((ci + di) % n + n) % n, j = ((cj + dj) % n + n) % n,
              k = ((ck + dk) % n + n) % n;
          auto it = buckets.find((static_cast<int64_t>(i) * n + j) * n + k);
          if (it == buckets.end()) continue;
          for (const auto& q : it->second)
            best = std::min(best, torus_diff(p, q).norm());
        }
    return best;
  }
};

}  // namespace

FoliationDecomposition decompose(const TrigSeries& /*f*/,
                                 const LevelSurface& M,
                                 const Eigen::Vector3d& /*B*/,
                                 const FoliationSingularities& sing) {
  if (sing.saddle_to_saddle)
    throw GenericityViolated(
        "decompose: saddle-to-saddle connection (codimension-one event)");

  const int N = M.resolution;
  const double r_cut = 1.1 / N;
  TorusHash hash(std::max(r_cut, 1.0 / 64));
  for (const auto& cnx : sing.connections)
    for (const auto& p : cnx.cycle) hash.insert(canonical(p));

  const size_t T = M.triangles.size();
  std::vector<Eigen::Vector3d> centroid(T);
  std::vector<bool> cut(T, false);
  for (size_t t = 0; t < T; ++t) {
    const Eigen::Vector3d& a = M.vertices[M.triangles[t][0]];
    Eigen::Vector3d p = a + torus_diff(M.vertices[M.triangles[t][1]], a) / 3.0 +
                        torus_diff(M.vertices[M.triangles[t][2]], a) / 3.0;
    centroid[t] = canonical(p);
    if (!sing.connections.empty() &&
        hash.min_dist(centroid[t], 10.0) < r_cut)
      cut[t] = true;
  }

  // adjacency through shared edges
  std::map<std::pair<int, int>, std::vector<int>> edge_tris;
  for (size_t t = 0; t < T; ++t)
    for (int e = 0; e < 3; ++e) {
      int a = M.triangles[t][e], b = M.triangles[t][(e + 1) % 3];
      edge_tris[{std::min(a, b), std::max(a, b)}].push_back(
          static_cast<int>(t));
    }
  std::vector<std::vector<int>> tri_adj(T);
  for (auto& [e, ts] : edge_tris)
    if (ts.size() == 2) {
      tri_adj[ts[0]].push_back(ts[1]);
      tri_adj[ts[1]].push_back(ts[0]);
    }

  // components of the uncut part
  std::vector<int> comp(T, -1);
  int n_comp = 0;
  for (size_t t0 = 0; t0 < T; ++t0) {
    if (cut[t0] || comp[t0] >= 0) continue;
    std::vector<int> stack{static_cast<int>(t0)};
    comp[t0] = n_comp;
    while (!stack.empty()) {
      int t = stack.back();
      stack.pop_back();
      for (int nb : tri_adj[t])
        if (!cut[nb] && comp[nb] < 0) {
          comp[nb] = n_comp;
          stack.push_back(nb);
        }
    }
    ++n_comp;
  }

  FoliationDecomposition out;
  std::vector<std::vector<int>> comp_tris(n_comp);
  for (size_t t = 0; t < T; ++t)
    if (comp[t] >= 0) comp_tris[comp[t]].push_back(static_cast<int>(t));

  for (int ci = 0; ci < n_comp; ++ci) {
    auto& tris = comp_tris[ci];
    if (tris.empty()) continue;
    CarrierClosure car;
    car.triangles = tris;
    std::set<int> in_comp(tris.begin(), tris.end());
    std::set<int> vs;
    std::set<std::pair<int, int>> es;
    // directed boundary edges a -> b; a pinch vertex can carry several
    std::map<int, std::vector<int>> bnext;
    int n_bedges = 0;
    for (int t : tris)
      for (int e = 0; e < 3; ++e) {
        int a = M.triangles[t][e], b = M.triangles[t][(e + 1) % 3];
        vs.insert(a);
        es.insert({std::min(a, b), std::max(a, b)});
        const auto& owners = edge_tris[{std::min(a, b), std::max(a, b)}];
        bool boundary = false;
        for (int o : owners)
          if (!in_comp.count(o)) boundary = true;
        if (owners.size() < 2) boundary = true;
        if (boundary) {
          bnext[a].push_back(b);  // induced orientation from the triangle
          ++n_bedges;
        }
      }
    car.chi_carrier = static_cast<int>(vs.size()) - static_cast<int>(es.size()) +
                      static_cast<int>(tris.size());
    // walk boundary loops; also collect disk area contributions
    Eigen::Vector3d area = Eigen::Vector3d::Zero();
    for (int t : tris) {
      const Eigen::Vector3d& a = M.vertices[M.triangles[t][0]];
      Eigen::Vector3d b = a + torus_diff(M.vertices[M.triangles[t][1]], a);
      Eigen::Vector3d c2 = a + torus_diff(M.vertices[M.triangles[t][2]], a);
      area += 0.5 * (b - a).cross(c2 - a);
    }
    for (auto& [start, nxt0] : bnext) {
      while (!nxt0.empty()) {
        std::vector<Eigen::Vector3d> loop;
        int cur = start;
        Eigen::Vector3d lift = M.vertices[cur];
        while (true) {
          loop.push_back(lift);
          auto it = bnext.find(cur);
          if (it == bnext.end() || it->second.empty())
            throw GenericityViolated("decompose: broken carrier boundary loop");
          int nb = it->second.back();
          it->second.pop_back();
          lift += torus_diff(M.vertices[nb], M.vertices[cur]);
          cur = nb;
          if (cur == start) break;
          if (loop.size() > static_cast<size_t>(n_bedges) + 2)
            throw GenericityViolated(
                "decompose: carrier boundary fails to close");
        }
        ++car.boundary_loops;
        // disk closing the loop, oriented against the induced boundary
        Eigen::Vector3d da = Eigen::Vector3d::Zero();
        for (size_t q = 0; q < loop.size(); ++q)
          da += 0.5 * loop[q].cross(loop[(q + 1) % loop.size()]);
        area -= da;
      }
    }
    (void)n_bedges;
    int chi_closed = car.chi_carrier + car.boundary_loops;
    if (chi_closed % 2 != 0)
      throw GenericityViolated("decompose: odd Euler characteristic of N_l");
    car.genus = (2 - chi_closed) / 2;
    for (int d = 0; d < 3; ++d) {
      car.cls[d] = static_cast<int>(std::lround(area[d]));
      if (std::abs(area[d] - car.cls[d]) >= 1e-2)
        throw NonIntegralClass("decompose: component class fails to round");
    }
    // Closed leaves are null-homotopic (their class pairs to zero with every
    // transverse direction of full irrationality degree), so a cylinder swept
    // by them has vanishing class; open-trajectory carriers carry +-mu != 0.
    if (car.cls == Eigen::Vector3i::Zero())
      out.cylinders.push_back(tris);
    else
      out.carriers.push_back(std::move(car));
  }
  return out;
}

namespace {

Eigen::Vector3i sign_fixed(Eigen::Vector3i v) {
  for (int d = 0; d < 3; ++d) {
    if (v[d] > 0) return v;
    if (v[d] < 0) return Eigen::Vector3i(-v);
  }
  return v;
}

Verdict verdict_at(const TrigSeries& f, const LevelSurface& M,
                   const Eigen::Vector3d& B) {
  auto sing = foliation_singularities(f, M, B);
  auto dec = decompose(f, M, B, sing);
  Verdict v;
  if (dec.carriers.empty()) {
    v.kind = VerdictKind::NoOpenTrajectories;
    return v;
  }
  bool chaotic = false;
  for (const auto& car : dec.carriers)
    if (car.genus != 1) chaotic = true;
  if (chaotic) {
    v.kind = VerdictKind::Chaotic;
    return v;
  }
  Eigen::Vector3i mu = sign_fixed(dec.carriers.front().cls);
  for (const auto& car : dec.carriers)
    if (sign_fixed(car.cls) != mu) {
      v.kind = VerdictKind::Chaotic;  // inconsistent labels: not stable TCI
      return v;
    }
  v.kind = VerdictKind::StableTCI;
  v.mu = mu;
  v.torus_count = static_cast<int>(dec.carriers.size());
  Eigen::Vector3d eta = mu.cast<double>().cross(B);
  eta.normalize();
  for (int d = 0; d < 3; ++d) {
    if (eta[d] > 1e-12) break;
    if (eta[d] < -1e-12) {
      eta = -eta;
      break;
    }
  }
  v.eta = eta;
  return v;
}

}  // namespace

Verdict verdict(const TrigSeries& f, const Eigen::Vector3d& B, double c,
                int resolution) {
  LevelSurface M = extract_level_surface(f, c, resolution);
  Verdict v = verdict_at(f, M, B);
  if (v.kind == VerdictKind::Chaotic) {
    // chaotic regimes are resolution-sensitive; re-confirm before reporting
    LevelSurface M2 = extract_level_surface(f, c, 2 * resolution);
    return verdict_at(f, M2, B);
  }
  return v;
}

Verdict verdict_on_surface(const TrigSeries& f, const LevelSurface& M,
                           const Eigen::Vector3d& B,
                           const LevelSurface* confirm) {
  Verdict v = verdict_at(f, M, B);
  if (v.kind == VerdictKind::Chaotic && confirm) return verdict_at(f, *confirm, B);
  return v;
}

EnergyInterval energy_interval(const TrigSeries& f, const Eigen::Vector3d& B,
                               double c_lo, double c_hi, double tol,
                               int resolution, int scan_samples) {
  if (tol <= 0) throw std::invalid_argument("energy_interval: tol must be > 0");
  auto crit = critical_values(f, std::max(16, resolution));
  const double span = c_hi - c_lo;

  auto carriers_at = [&](double c) -> int {  // 1 yes, 0 no, -1 unknown
    for (int attempt = 0; attempt < 4; ++attempt) {
      try {
        LevelSurface M = extract_level_surface(f, c, resolution, &crit);
        auto sing = foliation_singularities(f, M, B);
        auto dec = decompose(f, M, B, sing);
        return dec.carriers.empty() ? 0 : 1;
      } catch (const CriticalValue&) {
        c += 3e-6;
      } catch (const DomainError&) {
        // dodge an isolated bad level, but never move farther than the
        // endpoint tolerance: a retried answer must still be an answer
        // about (a tol-neighborhood of) the queried level
        c += std::max(3e-6, 0.25 * tol);
      }
    }
    return -1;
  };

  std::vector<double> cs(scan_samples);
  std::vector<int> pred(scan_samples);
  for (int i = 0; i < scan_samples; ++i) {
    cs[i] = c_lo + span * (i + 0.5) / scan_samples;
    pred[i] = carriers_at(cs[i]);
  }

  // blocks of carrier-positive samples
  int first = -1, last = -1;
  bool gap_after_block = false;
  for (int i = 0; i < scan_samples; ++i) {
    if (pred[i] == 1) {
      if (first < 0) first = i;
      if (last >= 0 && gap_after_block)
        throw NonConnectedInterval(
            "energy_interval: open-trajectory levels split into separated "
            "blocks");
      last = i;
    } else if (pred[i] == 0 && last >= 0) {
      gap_after_block = true;
    }
  }
  EnergyInterval out;
  if (first < 0) {
    out.kind = EnergyInterval::Empty;
    return out;
  }

  auto bisect = [&](double inside, double outside) {
    for (int it = 0; it < 60 && std::abs(outside - inside) > tol; ++it) {
      double mid = 0.5 * (inside + outside);
      int p = carriers_at(mid);
      if (p == 1)
        inside = mid;
      else
        outside = mid;
    }
    return inside;
  };

  double lo_in = cs[first];
  double lo_out = first > 0 ? cs[first - 1] : c_lo;
  double hi_in = cs[last];
  double hi_out = last + 1 < scan_samples ? cs[last + 1] : c_hi;
  out.c_minus = bisect(lo_in, lo_out);
  out.c_plus = bisect(hi_in, hi_out);
  out.kind = (out.c_plus - out.c_minus) < tol ? EnergyInterval::Point
                                              : EnergyInterval::Interval;
  if (out.kind == EnergyInterval::Point)
    out.c_minus = out.c_plus = 0.5 * (out.c_minus + out.c_plus);
  return out;
}

}  // namespace ql
