#include "mskit/modelspace.hpp"

#include <cmath>

namespace mskit {

int default_grid(double rho, int base) {
  int n = base;
  if (rho <= 0.0) return n;
  while (std::pow(rho, n / 4.0) / (1.0 - rho) >= 1e-13) {
    n *= 2;
    if (n > (1 << 20)) throw NoConvergence("grid rule diverges for rho close to 1");
  }
  return n;
}

ModelBasis::ModelBasis(const BlaschkeProduct& theta, int grid) : theta_(theta) {
  if (theta.degree() == 0) {
    throw DegreeZero("model space of a constant inner function is trivial");
  }
  const int n = grid > 0 ? grid : default_grid(theta.spectral_radius());
  theta_circle_ = theta.to_circle(n);
  const std::vector<cd> zeros = theta.expanded_zeros();
  const int d = static_cast<int>(zeros.size());
  samples_.resize(n, d);
  for (int j = 0; j < n; ++j) {
    const cd z = grid_node(n, j);
    cd partial = 1.0;
    for (int k = 0; k < d; ++k) {
      const cd a = zeros[k];
      samples_(j, k) = std::sqrt(1.0 - std::norm(a)) / (1.0 - std::conj(a) * z) * partial;
      partial *= (z - a) / (1.0 - std::conj(a) * z);
    }
  }
}

CircleFunction ModelBasis::basis_function(int k) const {
  return CircleFunction::from_samples(samples_.col(k));
}

Eigen::VectorXcd ModelBasis::project(const CircleFunction& f) const {
  if (f.grid_size() != grid_size()) {
    throw GridMismatch("function grid " + std::to_string(f.grid_size()) +
                       " does not match basis grid " + std::to_string(grid_size()));
  }
  return samples_.adjoint() * f.samples() / static_cast<double>(grid_size());
}

CircleFunction ModelBasis::synthesize(const Eigen::VectorXcd& coeffs) const {
  return CircleFunction::from_samples(samples_ * coeffs);
}

CircleFunction ModelBasis::apply_projection(const CircleFunction& f) const {
  return synthesize(project(f));
}

CircleFunction ModelBasis::apply_complement(const CircleFunction& f) const {
  return f - apply_projection(f);
}

CircleFunction ModelBasis::reproducing_kernel(cd w) const {
  if (std::abs(w) >= 1.0) throw Error("kernel point must lie in the open disk");
  const cd tw = std::conj(theta_.evaluate(w));
  const int n = grid_size();
  Eigen::VectorXcd s(n);
  for (int j = 0; j < n; ++j) {
    const cd z = grid_node(n, j);
    s(j) = (1.0 - tw * theta_circle_.samples()(j)) / (1.0 - std::conj(w) * z);
  }
  return CircleFunction::from_samples(std::move(s));
}

CircleFunction ModelBasis::kernel_at_zero() const {
  const cd t0 = std::conj(theta_.at_zero());
  return CircleFunction::from_samples(Eigen::VectorXcd::Constant(grid_size(), 1.0) -
                                      t0 * theta_circle_.samples());
}

CircleFunction ModelBasis::conjugate_kernel_at_zero() const {
  const cd t0 = theta_.at_zero();
  const int n = grid_size();
  Eigen::VectorXcd s(n);
  for (int j = 0; j < n; ++j) {
    s(j) = std::conj(grid_node(n, j)) * (theta_circle_.samples()(j) - t0);
  }
  return CircleFunction::from_samples(std::move(s));
}

CircleFunction ModelBasis::conjugate(const CircleFunction& f) const {
  if (f.grid_size() != grid_size()) throw GridMismatch("conjugation grid mismatch");
  const int n = grid_size();
  Eigen::VectorXcd s(n);
  for (int j = 0; j < n; ++j) {
    s(j) = theta_circle_.samples()(j) * std::conj(grid_node(n, j) * f.samples()(j));
  }
  return CircleFunction::from_samples(std::move(s));
}

Eigen::MatrixXcd ModelBasis::conjugation_matrix() const {
  const int d = dim();
  Eigen::MatrixXcd m(d, d);
  for (int k = 0; k < d; ++k) {
    m.col(k) = project(conjugate(basis_function(k)));
  }
  return m;
}

double ModelBasis::gram_residual() const {
  const Eigen::MatrixXcd gram =
      samples_.adjoint() * samples_ / static_cast<double>(grid_size());
  return (gram - Eigen::MatrixXcd::Identity(dim(), dim())).cwiseAbs().maxCoeff();
}

}  // namespace mskit
