#include "ql/cut_project.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "ql/errors.hpp"

namespace ql {

namespace {
constexpr double kGuard = 1e-9;
}

WindowPolytope WindowPolytope::interval(double lo, double hi) {
  WindowPolytope w;
  Eigen::VectorXd n1(1), n2(1);
  n1 << 1.0;
  n2 << -1.0;
  w.faces.push_back({n1, hi});
  w.faces.push_back({n2, -lo});
  w.bbox_lo = Eigen::VectorXd::Constant(1, lo);
  w.bbox_hi = Eigen::VectorXd::Constant(1, hi);
  return w;
}

WindowPolytope WindowPolytope::box(const Eigen::VectorXd& lo,
                                   const Eigen::VectorXd& hi) {
  WindowPolytope w;
  const int d = static_cast<int>(lo.size());
  for (int i = 0; i < d; ++i) {
    Eigen::VectorXd n = Eigen::VectorXd::Zero(d);
    n[i] = 1.0;
    w.faces.push_back({n, hi[i]});
    n[i] = -1.0;
    w.faces.push_back({n, -lo[i]});
  }
  w.bbox_lo = lo;
  w.bbox_hi = hi;
  return w;
}

WindowPolytope WindowPolytope::empty(int dim) {
  WindowPolytope w;
  Eigen::VectorXd n = Eigen::VectorXd::Zero(dim);
  n[0] = 1.0;
  w.faces.push_back({n, -1.0});
  n[0] = -1.0;
  w.faces.push_back({n, -1.0});
  w.bbox_lo = Eigen::VectorXd::Zero(dim);
  w.bbox_hi = Eigen::VectorXd::Zero(dim);
  return w;
}

double WindowPolytope::margin(const Eigen::VectorXd& q) const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& f : faces) m = std::min(m, f.offset - f.normal.dot(q));
  return m;
}

PointSet cut_and_project(const Eigen::MatrixXd& lattice_basis, int k,
                         const WindowPolytope& window, double physical_radius) {
  const int n = static_cast<int>(lattice_basis.rows());
  if (lattice_basis.cols() != n)
    throw std::invalid_argument("cut_and_project: basis must be square");
  if (k < 1 || k >= n) throw std::invalid_argument("cut_and_project: bad k");
  if (std::abs(lattice_basis.determinant()) < 1e-12)
    throw std::invalid_argument("cut_and_project: singular lattice basis");

  // Superspace box: |p| <= R per physical coordinate, window bbox for q.
  Eigen::VectorXd box_lo(n), box_hi(n);
  for (int i = 0; i < k; ++i) {
    box_lo[i] = -physical_radius;
    box_hi[i] = physical_radius;
  }
  for (int i = k; i < n; ++i) {
    box_lo[i] = window.bbox_lo[i - k] - 1.0;
    box_hi[i] = window.bbox_hi[i - k] + 1.0;
  }

  // z ranges from the corners of the box mapped through the inverse basis.
  const Eigen::MatrixXd inv = lattice_basis.inverse();
  Eigen::VectorXd z_lo = Eigen::VectorXd::Constant(n, 1e18);
  Eigen::VectorXd z_hi = Eigen::VectorXd::Constant(n, -1e18);
  for (int corner = 0; corner < (1 << n); ++corner) {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i)
      x[i] = (corner >> i & 1) ? box_hi[i] : box_lo[i];
    Eigen::VectorXd z = inv * x;
    z_lo = z_lo.cwiseMin(z);
    z_hi = z_hi.cwiseMax(z);
  }

  PointSet out;
  std::vector<long long> z(n);
  std::function<void(int)> rec = [&](int d) {
    if (d == n) {
      Eigen::VectorXd zz(n);
      for (int i = 0; i < n; ++i) zz[i] = static_cast<double>(z[i]);
      Eigen::VectorXd x = lattice_basis * zz;
      for (int i = 0; i < k; ++i)
        if (std::abs(x[i]) > physical_radius) return;
      Eigen::VectorXd q = x.tail(n - k);
      double m = window.margin(q);
      if (std::abs(m) < kGuard)
        throw WindowBoundaryHit(
            "cut_and_project: lattice point within guard band of the window "
            "boundary");
      if (m > 0) out.points.push_back(x.head(k));
      return;
    }
    long long lo = static_cast<long long>(std::floor(z_lo[d])) - 1;
    long long hi = static_cast<long long>(std::ceil(z_hi[d])) + 1;
    if (hi - lo > 4000000)
      throw std::invalid_argument("cut_and_project: enumeration box too large");
    for (z[d] = lo; z[d] <= hi; ++z[d]) rec(d + 1);
  };
  rec(0);

  if (out.points.empty()) {
    out.rho1 = std::numeric_limits<double>::infinity();
    out.rho2 = std::numeric_limits<double>::infinity();
    return out;
  }

  double min_d = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < out.points.size(); ++i)
    for (size_t j = i + 1; j < out.points.size(); ++j)
      min_d = std::min(min_d, (out.points[i] - out.points[j]).norm());
  out.rho2 = std::isfinite(min_d) ? min_d : physical_radius;

  // Covering radius over the interior of the sampled physical window.
  const double margin_r = 0.2 * physical_radius;
  const int per_axis = (k == 1) ? 512 : 48;
  double cover = 0.0;
  std::vector<int> idx(k, 0);
  std::function<void(int)> sample = [&](int d) {
    if (d == k) {
      Eigen::VectorXd y(k);
      for (int i = 0; i < k; ++i)
        y[i] = -physical_radius + margin_r +
               (2.0 * (physical_radius - margin_r)) * idx[i] / (per_axis - 1);
      double best = std::numeric_limits<double>::infinity();
      for (const auto& p : out.points) best = std::min(best, (p - y).norm());
      cover = std::max(cover, best);
      return;
    }
    for (idx[d] = 0; idx[d] < per_axis; ++idx[d]) sample(d + 1);
  };
  sample(0);
  out.rho1 = cover;
  return out;
}

}  // namespace ql
