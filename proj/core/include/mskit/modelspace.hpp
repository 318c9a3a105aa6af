#pragma once

#include <Eigen/Dense>

#include "mskit/blaschke.hpp"
#include "mskit/circle.hpp"

namespace mskit {

/// Smallest power-of-two grid >= base on which Fourier tails of a Blaschke
/// product with largest zero modulus rho are below 1e-13: the tail bound
/// rho^{n/4}/(1-rho) must clear that threshold.
int default_grid(double rho, int base = kDefaultGrid);

/// Orthonormal Takenaka-Malmquist basis of the model space K_theta sampled on
/// a uniform circle grid.
///
/// With ordered zeros a_1..a_d (repeated by multiplicity) the k-th basis
/// function is sqrt(1-|a_k|^2)/(1 - conj(a_k) z) * prod_{j<k} (z - a_j)/(1 -
/// conj(a_j) z), so theta = z^d yields {1, z, ..., z^{d-1}}. Values are
/// immutable; changing the grid creates a new basis.
class ModelBasis {
 public:
  /// grid = 0 picks default_grid(theta.spectral_radius()).
  /// Throws DegreeZero when theta is constant.
  explicit ModelBasis(const BlaschkeProduct& theta, int grid = 0);

  const BlaschkeProduct& inner_function() const { return theta_; }
  int dim() const { return static_cast<int>(samples_.cols()); }
  int grid_size() const { return static_cast<int>(samples_.rows()); }
  /// n x dim matrix of basis samples.
  const Eigen::MatrixXcd& sample_matrix() const { return samples_; }
  /// theta sampled on this grid.
  const CircleFunction& theta_circle() const { return theta_circle_; }
  CircleFunction basis_function(int k) const;

  /// Coefficients <f, e_k> of the projection onto K_theta.
  Eigen::VectorXcd project(const CircleFunction& f) const;
  CircleFunction synthesize(const Eigen::VectorXcd& coeffs) const;
  /// P_theta f as a circle function.
  CircleFunction apply_projection(const CircleFunction& f) const;
  CircleFunction apply_complement(const CircleFunction& f) const;

  /// Reproducing kernel k_w = (1 - conj(theta(w)) theta)/(1 - conj(w) z).
  CircleFunction reproducing_kernel(cd w) const;
  /// k_0 = 1 - conj(theta(0)) theta.
  CircleFunction kernel_at_zero() const;
  /// Conjugate kernel at zero, conj(z) (theta - theta(0)).
  CircleFunction conjugate_kernel_at_zero() const;

  /// Conjugation C f = theta conj(z) conj(f); antilinear isometric involution
  /// mapping K_theta onto itself.
  CircleFunction conjugate(const CircleFunction& f) const;
  /// Matrix M of the conjugation in this basis: coords(C f) = M conj(coords f).
  Eigen::MatrixXcd conjugation_matrix() const;

  /// Max-abs deviation of the sampled Gram matrix from the identity.
  double gram_residual() const;

  ModelBasis resampled(int grid) const { return ModelBasis(theta_, grid); }

 private:
  BlaschkeProduct theta_;
  CircleFunction theta_circle_;
  Eigen::MatrixXcd samples_;
};

}  // namespace mskit
