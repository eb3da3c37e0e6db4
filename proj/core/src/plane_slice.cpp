#include "ql/plane_slice.hpp"

#include <Eigen/SVD>
#include <stdexcept>

namespace ql {

PlaneSlice PlaneSlice::from_casimirs(const Eigen::MatrixXd& K,
                                     const Eigen::VectorXd& a) {
  const int n = static_cast<int>(K.cols());
  if (K.rows() != n - 2)
    throw std::invalid_argument("PlaneSlice: need n-2 Casimir covectors");
  if (n == 2) {  // no Casimirs: the plane is the whole space
    PlaneSlice s;
    s.casimirs = K;
    s.values = a;
    s.e1 = Eigen::Vector2d(1, 0);
    s.e2 = Eigen::Vector2d(0, 1);
    s.base = Eigen::Vector2d::Zero();
    return s;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(K, Eigen::ComputeFullV);
  if (svd.rank() != n - 2)
    throw std::invalid_argument("PlaneSlice: Casimirs not independent");
  PlaneSlice s;
  s.casimirs = K;
  s.values = a;
  s.e1 = svd.matrixV().col(n - 2);
  s.e2 = svd.matrixV().col(n - 1);
  // deterministic sign convention: largest-|entry| component positive
  for (Eigen::VectorXd* e : {&s.e1, &s.e2}) {
    int imax = 0;
    for (int i = 1; i < n; ++i)
      if (std::abs((*e)[i]) > std::abs((*e)[imax])) imax = i;
    if ((*e)[imax] < 0) *e = -*e;
  }
  // least-norm base point
  s.base = K.transpose() * (K * K.transpose()).ldlt().solve(a);
  if ((K * s.e1).lpNorm<Eigen::Infinity>() > 1e-12 ||
      (K * s.e2).lpNorm<Eigen::Infinity>() > 1e-12)
    throw std::logic_error("PlaneSlice: frame not in the kernel");
  return s;
}

PlaneSlice PlaneSlice::from_normal3(const Eigen::Vector3d& B, double a) {
  Eigen::MatrixXd K(1, 3);
  K << B[0], B[1], B[2];
  Eigen::VectorXd v(1);
  v << a;
  return from_casimirs(K, v);
}

QuasiperiodicFunction slice_function(const TrigSeries& f,
                                     const PlaneSlice& slice) {
  if (f.dimension() != slice.ambient_dim())
    throw std::invalid_argument("slice_function: dimension mismatch");
  Eigen::MatrixXd A(slice.ambient_dim(), 2);
  A.col(0) = slice.e1;
  A.col(1) = slice.e2;
  return QuasiperiodicFunction(f, AffineEmbedding(A, slice.base));
}

}  // namespace ql
