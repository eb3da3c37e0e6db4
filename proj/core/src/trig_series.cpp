#include "ql/trig_series.hpp"

#include <cassert>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ql {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<int> negate(const std::vector<int>& m) {
  std::vector<int> r(m.size());
  for (size_t i = 0; i < m.size(); ++i) r[i] = -m[i];
  return r;
}
}  // namespace

TrigSeries::TrigSeries(int dimension) : dimension_(dimension) {
  if (dimension < 2) throw std::invalid_argument("TrigSeries: dimension must be >= 2");
}

void TrigSeries::add_term(const std::vector<int>& freq, std::complex<double> coeff) {
  if (static_cast<int>(freq.size()) != dimension_)
    throw std::invalid_argument("TrigSeries: frequency vector has wrong dimension");
  std::vector<int> neg = negate(freq);
  if (neg == freq) {
    // m = 0: the constant term must be real
    coeffs_[freq] += std::complex<double>(2.0 * coeff.real(), 0.0);
    rebuild_packed();
    return;
  }
  coeffs_[freq] += coeff;
  coeffs_[neg] += std::conj(coeff);
  rebuild_packed();
}

void TrigSeries::rebuild_packed() {
  packed_.clear();
  for (const auto& [m, c] : coeffs_) {
    // keep the representative whose first nonzero component is positive
    int lead = 0;
    for (int v : m)
      if (v != 0) {
        lead = v;
        break;
      }
    if (lead < 0) continue;
    packed_.push_back({m, c.real(), c.imag(), lead == 0 ? 1.0 : 2.0});
  }
}

void TrigSeries::add_cos(const std::vector<int>& freq, double amplitude) {
  add_term(freq, std::complex<double>(amplitude / 2.0, 0.0));
}

void TrigSeries::add_sin(const std::vector<int>& freq, double amplitude) {
  add_term(freq, std::complex<double>(0.0, -amplitude / 2.0));
}

std::vector<TrigTerm> TrigSeries::terms() const {
  std::vector<TrigTerm> out;
  out.reserve(coeffs_.size());
  for (const auto& [m, c] : coeffs_) out.push_back({m, c});
  return out;
}

double TrigSeries::evaluate(const Eigen::VectorXd& x) const {
  assert(x.size() == dimension_);
  double re = 0.0;
  for (const auto& [m, c] : coeffs_) {
    double phase = 0.0;
    for (int s = 0; s < dimension_; ++s) phase += m[s] * x[s];
    re += c.real() * std::cos(kTwoPi * phase) - c.imag() * std::sin(kTwoPi * phase);
  }
  return re;
}

Eigen::VectorXd TrigSeries::gradient(const Eigen::VectorXd& x) const {
  assert(x.size() == dimension_);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(dimension_);
  for (const auto& [m, c] : coeffs_) {
    double phase = 0.0;
    for (int s = 0; s < dimension_; ++s) phase += m[s] * x[s];
    // d/dx_s Re(c e^{2 pi i phase}) = -2 pi m_s (c.re sin + c.im cos)
    double w = -kTwoPi * (c.real() * std::sin(kTwoPi * phase) +
                          c.imag() * std::cos(kTwoPi * phase));
    for (int s = 0; s < dimension_; ++s) g[s] += w * m[s];
  }
  return g;
}

Eigen::MatrixXd TrigSeries::hessian(const Eigen::VectorXd& x) const {
  assert(x.size() == dimension_);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dimension_, dimension_);
  for (const auto& [m, c] : coeffs_) {
    double phase = 0.0;
    for (int s = 0; s < dimension_; ++s) phase += m[s] * x[s];
    double w = -kTwoPi * kTwoPi * (c.real() * std::cos(kTwoPi * phase) -
                                   c.imag() * std::sin(kTwoPi * phase));
    for (int s = 0; s < dimension_; ++s)
      for (int t = 0; t < dimension_; ++t) h(s, t) += w * m[s] * m[t];
  }
  return h;
}

double TrigSeries::evaluate3(const Eigen::Vector3d& x) const {
  assert(dimension_ == 3);
  double out = 0.0;
  for (const auto& t : packed_) {
    double phase =
        kTwoPi * (t.freq[0] * x[0] + t.freq[1] * x[1] + t.freq[2] * x[2]);
    out += t.w * (t.re * std::cos(phase) - t.im * std::sin(phase));
  }
  return out;
}

Eigen::Vector3d TrigSeries::gradient3(const Eigen::Vector3d& x) const {
  assert(dimension_ == 3);
  Eigen::Vector3d g = Eigen::Vector3d::Zero();
  for (const auto& t : packed_) {
    double phase =
        kTwoPi * (t.freq[0] * x[0] + t.freq[1] * x[1] + t.freq[2] * x[2]);
    double w =
        -kTwoPi * t.w * (t.re * std::sin(phase) + t.im * std::cos(phase));
    g[0] += w * t.freq[0];
    g[1] += w * t.freq[1];
    g[2] += w * t.freq[2];
  }
  return g;
}

Eigen::Matrix3d TrigSeries::hessian3(const Eigen::Vector3d& x) const {
  assert(dimension_ == 3);
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  for (const auto& t : packed_) {
    double phase =
        kTwoPi * (t.freq[0] * x[0] + t.freq[1] * x[1] + t.freq[2] * x[2]);
    double w = -kTwoPi * kTwoPi * t.w *
               (t.re * std::cos(phase) - t.im * std::sin(phase));
    for (int s = 0; s < 3; ++s)
      for (int u = 0; u < 3; ++u) h(s, u) += w * t.freq[s] * t.freq[u];
  }
  return h;
}

double TrigSeries::coeff_norm() const {
  double s = 0.0;
  for (const auto& [m, c] : coeffs_) s += std::abs(c);
  return s;
}

double TrigSeries::gradient_bound() const {
  double s = 0.0;
  for (const auto& [m, c] : coeffs_) {
    double mn = 0.0;
    for (int v : m) mn += double(v) * v;
    s += kTwoPi * std::sqrt(mn) * std::abs(c);
  }
  return s;
}

TrigSeries TrigSeries::cos_sum(int n) {
  TrigSeries f(n);
  for (int j = 0; j < n; ++j) {
    std::vector<int> m(n, 0);
    m[j] = 1;
    f.add_cos(m, 1.0);
  }
  return f;
}

TrigSeries TrigSeries::sin_sum(int n) {
  TrigSeries f(n);
  for (int j = 0; j < n; ++j) {
    std::vector<int> m(n, 0);
    m[j] = 1;
    f.add_sin(m, 1.0);
  }
  return f;
}

}  // namespace ql
