#pragma once

#include <vector>

#include "mskit/operators.hpp"

namespace mskit {

/// Relative singular-value cutoff separating nullspace directions from the
/// rest in vectorized intertwining systems.
inline constexpr double kRankCutoff = 1e-10;

/// Orthonormal basis (Frobenius inner product) of {X : P X = X Q} computed by
/// SVD of the vectorized map; optionally reports the full singular spectrum.
std::vector<Eigen::MatrixXcd> sylvester_nullspace(const Eigen::MatrixXcd& p,
                                                  const Eigen::MatrixXcd& q,
                                                  Eigen::VectorXd* singular_values = nullptr,
                                                  double rank_tol = kRankCutoff);

struct IntertwinerBasis {
  std::vector<OperatorMatrix> ops;
  /// Singular values of the vectorized system, descending.
  Eigen::VectorXd singular_values;
  int dim() const { return static_cast<int>(ops.size()); }
};

/// All solutions of S_alpha A = A S_theta as an orthonormal basis; the
/// dimension equals deg gcd(alpha, theta).
IntertwinerBasis solve_intertwiners(const ModelBasis& domain, const ModelBasis& codomain);

/// Symbol phi = A k_0^theta of an intertwiner, expanded in the codomain space.
/// Throws NotAnIntertwiner when the residual of S_alpha A - A S_theta exceeds
/// the tolerance.
CircleFunction symbol_of_intertwiner(const OperatorMatrix& a, const ModelBasis& domain,
                                     const ModelBasis& codomain, double residual_tol = 1e-8);

/// Relative distance of phi from (alpha/gcd) K_gcd; 0 for phi = 0.
double membership_residual(const CircleFunction& phi, const BlaschkeProduct& theta,
                           const BlaschkeProduct& alpha);

/// Both sides of the commutator relation S_alpha A_phi - A_phi S_theta =
/// P_alpha(phi theta) (x) conj-kernel - k_0^alpha (x) P_theta(conj(z phi));
/// returns the left side and the deviation between the sides.
struct CommutatorDefect {
  Eigen::MatrixXcd defect;
  double formula_residual = 0.0;
};
CommutatorDefect commutator_defect(const CircleFunction& phi, const ModelBasis& domain,
                                   const ModelBasis& codomain);

/// Cancellation criterion: the commutator vanishes exactly when phi*theta
/// differs from a constant by something orthogonal to K_lcm(alpha,theta).
struct CancellationResult {
  bool cancels = false;
  cd c = 0.0;
  double residual = 0.0;
};
CancellationResult cancellation_test(const CircleFunction& phi, const BlaschkeProduct& theta,
                                     const BlaschkeProduct& alpha, double tol = 1e-9);

/// Intersection alpha K_theta with theta K_alpha inside K_{alpha*theta},
/// via principal angles, together with its distance to lcm K_gcd.
struct IntersectionResult {
  /// Orthonormal coordinates (columns) of the intersection in the K_{alpha
  /// theta} Takenaka-Malmquist basis.
  Eigen::MatrixXcd basis_coords;
  int dim = 0;
  /// Operator-norm distance between the orthogonal projections onto the
  /// intersection and onto lcm K_gcd (1.0 when dimensions disagree).
  double distance_to_lcm_gcd = 0.0;
  /// Cosines of the principal angles between alpha K_theta and theta K_alpha.
  Eigen::VectorXd principal_cosines;
};
IntersectionResult intersection_subspace(const BlaschkeProduct& theta,
                                         const BlaschkeProduct& alpha, int grid = 0);

/// Star transform A' = C_alpha conj(A) conj(C_theta): maps solutions of
/// S_alpha A = A S_theta to solutions of S_alpha^* A' = A' S_theta^*.
OperatorMatrix star_transform(const OperatorMatrix& a, const ModelBasis& domain,
                              const ModelBasis& codomain, double residual_tol = 1e-8);

/// Matrix of the antilinear flip J# from K_{beta#} into K_beta, with the
/// convention coords(J# f) = M conj(coords f).
Eigen::MatrixXcd jsharp_matrix(const ModelBasis& from_sharp, const ModelBasis& to);

/// Hankel transform B = J# A C_theta of a solution of S_{alpha#} A =
/// A S_theta; B solves S_alpha B = B S_theta^*.
OperatorMatrix hankel_transform(const OperatorMatrix& a, const ModelBasis& domain,
                                const ModelBasis& codomain_sharp, const ModelBasis& codomain,
                                double residual_tol = 1e-8);

}  // namespace mskit
