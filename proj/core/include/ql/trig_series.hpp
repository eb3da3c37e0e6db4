#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <vector>

namespace ql {

struct TrigTerm {
  std::vector<int> freq;          // integer frequency vector in Z^n
  std::complex<double> coeff;
};

/// Finite real trigonometric series f(x) = sum_m c_m exp(2 pi i m.x) on T^n.
/// Terms are kept Hermitian-symmetric at all times: adding (m, c) also adds
/// (-m, conj(c)), so evaluation is real by construction.
class TrigSeries {
 public:
  explicit TrigSeries(int dimension);

  int dimension() const { return dimension_; }

  /// Adds c exp(2 pi i m.x) + conj(c) exp(-2 pi i m.x).
  void add_term(const std::vector<int>& freq, std::complex<double> coeff);
  /// amplitude * cos(2 pi m.x)
  void add_cos(const std::vector<int>& freq, double amplitude);
  /// amplitude * sin(2 pi m.x)
  void add_sin(const std::vector<int>& freq, double amplitude);

  std::vector<TrigTerm> terms() const;

  double evaluate(const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const;

  /// Allocation-free fast paths for the three-quasiperiod tracing loops.
  /// Valid only when dimension() == 3.
  double evaluate3(const Eigen::Vector3d& x) const;
  Eigen::Vector3d gradient3(const Eigen::Vector3d& x) const;
  Eigen::Matrix3d hessian3(const Eigen::Vector3d& x) const;

  /// Sum of |c_m|; an upper bound for |f|.
  double coeff_norm() const;
  /// Upper bound for |grad f|.
  double gradient_bound() const;

  static TrigSeries cos_sum(int n);   // cos(2 pi x_1) + ... + cos(2 pi x_n)
  static TrigSeries sin_sum(int n);

 private:
  void rebuild_packed();

  int dimension_;
  std::map<std::vector<int>, std::complex<double>> coeffs_;
  // half-spectrum flattened for fast evaluation: one representative per
  // Hermitian pair, with weight 2 (weight 1 for the constant term)
  struct Packed {
    std::vector<int> freq;
    double re, im, w;
  };
  std::vector<Packed> packed_;
};

}  // namespace ql
