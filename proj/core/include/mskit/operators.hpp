#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mskit/modelspace.hpp"

namespace mskit {

/// Identifies the space an operator acts on: a model space over a given
/// Blaschke product and grid, or a windowed dual-space section stack.
struct SpaceTag {
  std::string key;
  int dim = 0;
  bool operator==(const SpaceTag&) const = default;
};

/// Canonical tag of K_theta on the basis grid.
SpaceTag space_tag(const ModelBasis& basis);

/// Dense complex matrix tagged with domain and codomain spaces. Composition
/// and addition check the tags and throw GridMismatch when they disagree.
class OperatorMatrix {
 public:
  OperatorMatrix() = default;
  OperatorMatrix(Eigen::MatrixXcd m, SpaceTag domain, SpaceTag codomain);

  int rows() const { return static_cast<int>(mat_.rows()); }
  int cols() const { return static_cast<int>(mat_.cols()); }
  const Eigen::MatrixXcd& matrix() const { return mat_; }
  const SpaceTag& domain() const { return domain_; }
  const SpaceTag& codomain() const { return codomain_; }

  /// Conjugate transpose with tags swapped.
  OperatorMatrix adjoint() const;

  OperatorMatrix operator*(const OperatorMatrix& rhs) const;
  OperatorMatrix operator+(const OperatorMatrix& rhs) const;
  OperatorMatrix operator-(const OperatorMatrix& rhs) const;
  OperatorMatrix operator*(cd scalar) const;

  double frobenius_norm() const { return mat_.norm(); }

  static OperatorMatrix identity(const SpaceTag& tag);
  /// Rank-one u (x) v acting as x -> <x, v> u, in orthonormal coordinates.
  static OperatorMatrix rank_one(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v,
                                 const SpaceTag& domain, const SpaceTag& codomain);

 private:
  Eigen::MatrixXcd mat_;
  SpaceTag domain_;
  SpaceTag codomain_;
};

/// Matrix of the truncated Toeplitz operator with the given symbol: entry
/// (i,j) = <phi e_j^theta, e_i^alpha> by grid quadrature. Both bases must
/// share the symbol's grid.
OperatorMatrix atto_matrix(const CircleFunction& phi, const ModelBasis& domain,
                           const ModelBasis& codomain);

/// Compressed shift S = A_z on K_theta.
OperatorMatrix compressed_shift(const ModelBasis& basis);

/// Largest singular value.
double operator_norm(const Eigen::MatrixXcd& m);
inline double operator_norm(const OperatorMatrix& a) { return operator_norm(a.matrix()); }

/// Defect D = A - S_alpha A S_theta^* together with its rank-one structure
/// test: A is a truncated Toeplitz operator with analytic symbol exactly when
/// D = psi (x) k_0^theta for some psi in K_alpha.
struct AnalyticDefect {
  Eigen::MatrixXcd defect;
  bool factorizable = false;
  /// Coordinates of psi in the codomain basis (zero when not factorizable).
  Eigen::VectorXcd psi;
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  /// |cos| of the angle between the leading right singular vector and the
  /// k_0^theta coordinate vector; 1 when the defect vanishes.
  double kernel_alignment = 1.0;
};
AnalyticDefect analytic_defect(const OperatorMatrix& a, const ModelBasis& domain,
                               const ModelBasis& codomain);

/// Truncation sizes tried by dist_to_alpha_hinf, in order.
std::vector<int> default_hankel_schedule();

/// Distance from phi to alpha H^infinity, computed as the norm of the Hankel
/// operator with symbol conj(alpha) phi via truncated Hankel matrices of
/// increasing size. Throws NoConvergence when the schedule is exhausted
/// before two consecutive values agree within tol.
double dist_to_alpha_hinf(const CircleFunction& phi, const BlaschkeProduct& alpha,
                          const std::vector<int>& schedule = default_hankel_schedule(),
                          double tol = 1e-8);

}  // namespace mskit
