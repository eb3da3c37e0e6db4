#pragma once

#include <Eigen/Dense>

#include "ql/trig_series.hpp"

namespace ql {

/// Affine map R^k -> R^n, y |-> A y + x0, with A of full column rank.
struct AffineEmbedding {
  Eigen::MatrixXd A;    // n x k
  Eigen::VectorXd x0;   // n

  AffineEmbedding(Eigen::MatrixXd a, Eigen::VectorXd offset);

  int superspace_dim() const { return static_cast<int>(A.rows()); }
  int physical_dim() const { return static_cast<int>(A.cols()); }

  Eigen::VectorXd map(const Eigen::VectorXd& y) const { return A * y + x0; }
};

/// phi(y) = f(A y + x0) for a finite trigonometric series f on T^n.
class QuasiperiodicFunction {
 public:
  QuasiperiodicFunction(TrigSeries series, AffineEmbedding embedding);

  const TrigSeries& series() const { return series_; }
  const AffineEmbedding& embedding() const { return embedding_; }
  int physical_dim() const { return embedding_.physical_dim(); }

  double evaluate(const Eigen::VectorXd& y) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& y) const;

  /// Values on the regular grid y = origin + (i*h, j*h), i,j in [0, count).
  /// Only for k = 2. Uses per-term phase recurrences; row-major (j fastest).
  std::vector<double> grid_values(const Eigen::Vector2d& origin, double h,
                                  int count) const;

 private:
  TrigSeries series_;
  AffineEmbedding embedding_;
};

/// Physical shift a with sup-sample |phi2(y+a) - phi1(y)| < epsilon, for two
/// descendants of the same series (embeddings differing only in x0). Found by
/// simultaneous Diophantine approximation of the offset difference modulo Z^n.
/// Throws NotFound when nothing within |a| <= search_radius achieves epsilon.
Eigen::VectorXd related_shift(const TrigSeries& f, const AffineEmbedding& emb1,
                              const AffineEmbedding& emb2, double epsilon,
                              double search_radius);

}  // namespace ql
