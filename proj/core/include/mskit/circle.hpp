#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>

#include "mskit/errors.hpp"

namespace mskit {

using cd = std::complex<double>;

/// Number of uniform grid points used when no size is requested explicitly.
inline constexpr int kDefaultGrid = 4096;

/// j-th node of the n-point uniform grid on the unit circle, exp(2*pi*i*j/n).
cd grid_node(int n, int j);

/// Forward DFT with the analysis normalization: c[m] = (1/n) sum_j f_j w^{-mj}.
Eigen::VectorXcd dft(const Eigen::VectorXcd& samples);

/// Inverse of dft: f_j = sum_m c[m] w^{mj}.
Eigen::VectorXcd idft(const Eigen::VectorXcd& coeffs);

/// A function on the unit circle held as samples on a uniform n-point grid
/// together with its discrete Fourier coefficients.
///
/// Coefficient indexing: frequency k in [-n/2, n/2) lives in storage slot
/// (k mod n), so coeff(k) is the trigonometric coefficient of z^k as long as
/// the function is band limited well inside the grid. Values are immutable;
/// every operation returns a new value. Grids never resize implicitly, and
/// mixing grids raises GridMismatch.
class CircleFunction {
 public:
  CircleFunction() = default;

  static CircleFunction from_samples(Eigen::VectorXcd samples);
  /// Builds sum_{k=lo}^{lo+len-1} coeffs[k-lo] z^k on an n-point grid.
  static CircleFunction from_coefficients(int lo, const Eigen::VectorXcd& coeffs, int n);
  static CircleFunction from_function(const std::function<cd(cd)>& f, int n);
  static CircleFunction constant(cd value, int n);
  /// The monomial z^k (k may be negative).
  static CircleFunction monomial(int k, int n);

  int grid_size() const { return static_cast<int>(samples_.size()); }
  const Eigen::VectorXcd& samples() const { return samples_; }
  const Eigen::VectorXcd& coefficient_array() const { return coeffs_; }
  /// Coefficient of z^k; requires -n/2 <= k < n/2.
  cd coeff(int k) const;

  CircleFunction operator+(const CircleFunction& g) const;
  CircleFunction operator-(const CircleFunction& g) const;
  CircleFunction operator*(const CircleFunction& g) const;  // pointwise
  CircleFunction operator*(cd scalar) const;
  friend CircleFunction operator*(cd scalar, const CircleFunction& f) { return f * scalar; }
  CircleFunction conj() const;

  /// Analytic projection: keeps coefficients k >= 0.
  CircleFunction p_plus() const;
  /// Coanalytic projection onto conj(z H^2): keeps coefficients k < 0.
  CircleFunction p_minus() const;
  /// Projection onto alpha H^2 for inner alpha: alpha * p_plus(conj(alpha) * f).
  CircleFunction p_shifted_h2(const CircleFunction& alpha) const;
  /// Flip J# f(z) = conj(f(conj(z))); coefficients get conjugated in place.
  CircleFunction jsharp() const;

  /// L^2 inner product on the circle, (1/n) sum f_j conj(g_j).
  cd inner(const CircleFunction& g) const;
  double norm() const;
  double sup_abs() const;

  /// Largest |k| with |coeff(k)| > tol, or 0 for (numerically) constant f.
  int effective_band(double tol = 1e-13) const;
  /// True when the coefficient mass is confined to |k| < n/4, i.e. the grid
  /// represents the function without aliasing at the given tolerance.
  bool exact_band(double tol = 1e-12) const { return effective_band(tol) < grid_size() / 4; }
  /// Same function on a different power-of-two grid via coefficient transfer.
  CircleFunction resampled(int n) const;

 private:
  CircleFunction(Eigen::VectorXcd samples, Eigen::VectorXcd coeffs)
      : samples_(std::move(samples)), coeffs_(std::move(coeffs)) {}

  Eigen::VectorXcd samples_;
  Eigen::VectorXcd coeffs_;
};

}  // namespace mskit
