#include "mskit/circle.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>

namespace mskit {
namespace {

void require_grid(int n) {
  if (n < 4 || (n & (n - 1)) != 0) {
    throw GridMismatch("grid size must be a power of two, at least 4; got " + std::to_string(n));
  }
}

Eigen::FFT<double>& fft_engine() {
  thread_local Eigen::FFT<double> engine;
  return engine;
}

}  // namespace

cd grid_node(int n, int j) {
  const double t = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
  return {std::cos(t), std::sin(t)};
}

Eigen::VectorXcd dft(const Eigen::VectorXcd& samples) {
  const int n = static_cast<int>(samples.size());
  require_grid(n);
  Eigen::VectorXcd out(n);
  fft_engine().fwd(out, samples);
  return out / static_cast<double>(n);
}

Eigen::VectorXcd idft(const Eigen::VectorXcd& coeffs) {
  const int n = static_cast<int>(coeffs.size());
  require_grid(n);
  Eigen::VectorXcd out(n);
  fft_engine().inv(out, coeffs);
  return out * static_cast<double>(n);
}

CircleFunction CircleFunction::from_samples(Eigen::VectorXcd samples) {
  Eigen::VectorXcd coeffs = dft(samples);
  return CircleFunction(std::move(samples), std::move(coeffs));
}

CircleFunction CircleFunction::from_coefficients(int lo, const Eigen::VectorXcd& coeffs, int n) {
  require_grid(n);
  if (coeffs.size() > n) {
    throw GridMismatch("coefficient window wider than grid");
  }
  Eigen::VectorXcd full = Eigen::VectorXcd::Zero(n);
  for (int i = 0; i < coeffs.size(); ++i) {
    const int k = lo + i;
    const int slot = ((k % n) + n) % n;
    full(slot) += coeffs(i);
  }
  Eigen::VectorXcd samples = idft(full);
  return CircleFunction(std::move(samples), std::move(full));
}

CircleFunction CircleFunction::from_function(const std::function<cd(cd)>& f, int n) {
  require_grid(n);
  Eigen::VectorXcd samples(n);
  for (int j = 0; j < n; ++j) samples(j) = f(grid_node(n, j));
  return from_samples(std::move(samples));
}

CircleFunction CircleFunction::constant(cd value, int n) {
  require_grid(n);
  return CircleFunction(Eigen::VectorXcd::Constant(n, value),
                        Eigen::VectorXcd::Unit(n, 0) * value);
}

CircleFunction CircleFunction::monomial(int k, int n) {
  Eigen::VectorXcd one(1);
  one(0) = 1.0;
  return from_coefficients(k, one, n);
}

cd CircleFunction::coeff(int k) const {
  const int n = grid_size();
  if (k < -n / 2 || k >= n / 2) {
    throw GridMismatch("coefficient index " + std::to_string(k) + " outside grid band");
  }
  return coeffs_(((k % n) + n) % n);
}

namespace {
void require_same(const CircleFunction& f, const CircleFunction& g) {
  if (f.grid_size() != g.grid_size()) {
    throw GridMismatch("operands on different grids: " + std::to_string(f.grid_size()) + " vs " +
                       std::to_string(g.grid_size()));
  }
}
}  // namespace

CircleFunction CircleFunction::operator+(const CircleFunction& g) const {
  require_same(*this, g);
  return CircleFunction(samples_ + g.samples_, coeffs_ + g.coeffs_);
}

CircleFunction CircleFunction::operator-(const CircleFunction& g) const {
  require_same(*this, g);
  return CircleFunction(samples_ - g.samples_, coeffs_ - g.coeffs_);
}

CircleFunction CircleFunction::operator*(const CircleFunction& g) const {
  require_same(*this, g);
  return from_samples(samples_.cwiseProduct(g.samples_));
}

CircleFunction CircleFunction::operator*(cd scalar) const {
  return CircleFunction(samples_ * scalar, coeffs_ * scalar);
}

CircleFunction CircleFunction::conj() const {
  return from_samples(samples_.conjugate());
}

CircleFunction CircleFunction::p_plus() const {
  const int n = grid_size();
  Eigen::VectorXcd c = coeffs_;
  // Slots n/2 .. n-1 hold the negative frequencies -n/2 .. -1.
  c.segment(n / 2, n / 2).setZero();
  Eigen::VectorXcd s = idft(c);
  return CircleFunction(std::move(s), std::move(c));
}

CircleFunction CircleFunction::p_minus() const {
  const int n = grid_size();
  Eigen::VectorXcd c = coeffs_;
  c.segment(0, n / 2).setZero();
  Eigen::VectorXcd s = idft(c);
  return CircleFunction(std::move(s), std::move(c));
}

CircleFunction CircleFunction::p_shifted_h2(const CircleFunction& alpha) const {
  require_same(*this, alpha);
  return alpha * (alpha.conj() * *this).p_plus();
}

CircleFunction CircleFunction::jsharp() const {
  const int n = grid_size();
  Eigen::VectorXcd s(n);
  for (int j = 0; j < n; ++j) s(j) = std::conj(samples_((n - j) % n));
  return CircleFunction(std::move(s), coeffs_.conjugate());
}

cd CircleFunction::inner(const CircleFunction& g) const {
  require_same(*this, g);
  return g.samples_.dot(samples_) / static_cast<double>(grid_size());
}

double CircleFunction::norm() const {
  return samples_.norm() / std::sqrt(static_cast<double>(grid_size()));
}

double CircleFunction::sup_abs() const {
  return samples_.cwiseAbs().maxCoeff();
}

int CircleFunction::effective_band(double tol) const {
  const int n = grid_size();
  int band = 0;
  for (int k = -n / 2; k < n / 2; ++k) {
    if (std::abs(coeffs_(((k % n) + n) % n)) > tol) band = std::max(band, std::abs(k));
  }
  return band;
}

CircleFunction CircleFunction::resampled(int n) const {
  require_grid(n);
  const int old_n = grid_size();
  if (n == old_n) return *this;
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n);
  const int keep = std::min(old_n, n) / 2;
  for (int k = -keep; k < keep; ++k) {
    c(((k % n) + n) % n) = coeffs_(((k % old_n) + old_n) % old_n);
  }
  Eigen::VectorXcd s = idft(c);
  return CircleFunction(std::move(s), std::move(c));
}

}  // namespace mskit
