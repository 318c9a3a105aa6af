#pragma once

#include "mskit/intertwine.hpp"
#include "mskit/modelspace.hpp"
#include "mskit/operators.hpp"

namespace mskit {

/// Finite section of the Laurent scale used to realize K_theta-perp.
/// Exponents lo..hi are representable; guard is the interior margin used by
/// operator identities (0 means: compute per operation from symbol bands);
/// grid is the FFT size products are evaluated on.
struct LaurentWindow {
  int lo = -128;
  int hi = 192;
  int guard = 0;
  int grid = kDefaultGrid;

  /// Throws WindowTooSmall when the invariants fail (lo < 0 < hi, a positive
  /// guard below min(|lo|, hi)/2, nonempty guarded interior).
  void validate() const;
  LaurentWindow doubled() const;
};

/// Orthonormal section bases of K_theta-perp = theta H^2 + H^2_- inside a
/// Laurent window: {theta z^j : 0 <= j < K} with K = hi - band(theta), and
/// {z^-1, ..., z^lo}. Both families are exactly orthonormal.
class DualSections {
 public:
  DualSections(const BlaschkeProduct& theta, const LaurentWindow& window);

  int analytic_count() const { return k_; }
  int minus_count() const { return -window_.lo; }
  int total() const { return k_ + minus_count(); }
  const BlaschkeProduct& inner_function() const { return theta_; }
  const LaurentWindow& window() const { return window_; }
  const CircleFunction& theta_circle() const { return theta_circle_; }
  int theta_band() const { return band_; }

  /// Coordinates <f, b_idx> for all section vectors; index layout is
  /// [theta z^0 .. theta z^{K-1}, z^-1 .. z^lo].
  Eigen::VectorXcd project(const CircleFunction& f) const;
  CircleFunction synthesize(const Eigen::VectorXcd& coords) const;
  CircleFunction section_function(int idx) const;

  /// Section indices whose support stays at least `guard` exponents away
  /// from the window edges.
  std::vector<int> interior_indices(int guard) const;

  SpaceTag tag() const;

 private:
  BlaschkeProduct theta_;
  LaurentWindow window_;
  CircleFunction theta_circle_;
  int band_ = 0;
  int k_ = 0;
};

/// 2x2 block operator [T-hat, Gamma-check; Gamma-hat, T-check] between two
/// windowed dual spaces.
class DualBlockOperator {
 public:
  DualBlockOperator(DualSections domain, DualSections codomain, Eigen::MatrixXcd t_hat,
                    Eigen::MatrixXcd gamma_check, Eigen::MatrixXcd gamma_hat,
                    Eigen::MatrixXcd t_check, int symbol_band = 0);

  const DualSections& domain() const { return domain_; }
  const DualSections& codomain() const { return codomain_; }
  const Eigen::MatrixXcd& t_hat() const { return t_hat_; }
  const Eigen::MatrixXcd& gamma_check() const { return gamma_check_; }
  const Eigen::MatrixXcd& gamma_hat() const { return gamma_hat_; }
  const Eigen::MatrixXcd& t_check() const { return t_check_; }
  /// Largest effective band among the product symbols the blocks were filled
  /// from (0 for hand-assembled operators).
  int symbol_band() const { return symbol_band_; }

  Eigen::MatrixXcd assembled() const;

 private:
  DualSections domain_;
  DualSections codomain_;
  Eigen::MatrixXcd t_hat_, gamma_check_, gamma_hat_, t_check_;
  int symbol_band_ = 0;
};

/// Blocks of [T-hat_{psi1}, Gamma-check_{psi2}; Gamma-hat_{psi3},
/// T-check_{psi4}] filled from Fourier coefficients of the product symbols.
DualBlockOperator blocks_from_symbols(const CircleFunction& psi1, const CircleFunction& psi2,
                                      const CircleFunction& psi3, const CircleFunction& psi4,
                                      const BlaschkeProduct& theta, const BlaschkeProduct& alpha,
                                      const LaurentWindow& window);

/// Dual truncated Toeplitz operator: all four blocks share the symbol phi.
DualBlockOperator dtto_blocks(const CircleFunction& phi, const BlaschkeProduct& theta,
                              const BlaschkeProduct& alpha, const LaurentWindow& window);

/// The compressed multiplication by z on K_theta-perp: shift on the analytic
/// section, rank-one corner conj(theta(0)) theta (x) conj(z), truncated shift
/// on the coanalytic section; the Gamma-hat block vanishes.
DualBlockOperator dz_block(const BlaschkeProduct& theta, const LaurentWindow& window);

/// Smallest window, starting from `base` and doubling, whose automatic guard
/// accommodates the given symbol band for the pair (theta, alpha). Throws
/// WindowTooSmall when six doublings do not suffice.
LaurentWindow fitted_window(const BlaschkeProduct& theta, const BlaschkeProduct& alpha,
                            int symbol_band, LaurentWindow base = LaurentWindow{});

/// Interior residual of D Dz^theta - Dz^alpha D for a block operator D.
double dual_intertwine_residual(const DualBlockOperator& d);

/// Interior residual of D_phi Dz^theta - Dz^alpha D_phi.
double interior_commutator_residual(const CircleFunction& phi, const BlaschkeProduct& theta,
                                    const BlaschkeProduct& alpha, const LaurentWindow& window);

enum class IdattoCase { case1, case2, none };

/// Symbol classification for the commutation criterion: case1 when alpha(0) =
/// theta(0) = 0 and phi lies in (alpha/gcd) K_{z gcd}; case2 when alpha and
/// theta share zeros and phi k_0^theta lies in K_{z theta}.
IdattoCase idatto_classify(const CircleFunction& phi, const BlaschkeProduct& theta,
                           const BlaschkeProduct& alpha, double tol = 1e-8);

/// Residual of f against the subspace u K_b (relative; 0 for f = 0). A
/// constant b means the subspace is {0}, giving 1 for nonzero f.
double model_projection_residual(const CircleFunction& f, const BlaschkeProduct& u,
                                 const BlaschkeProduct& b);

/// Interior residual of the rank-two commutator identity: D_phi Dz - Dz D_phi
/// equals alpha (x) C_theta P_theta-perp(theta conj(alpha) phi k_0^alpha)
/// minus P_alpha-perp(phi k_0^theta) (x) conj(z).
double rank2_identity_residual(const CircleFunction& phi, const BlaschkeProduct& theta,
                               const BlaschkeProduct& alpha, const LaurentWindow& window);

/// Max deviation |<D M_z f, M_z g> - <D f, g>| over section vectors f, g with
/// vanishing conj(z) coefficient, where shifted vectors stay in the window.
double shift_invariance_residual(const DualBlockOperator& d);

struct KmutantInput {
  int case_id = 1;
  CircleFunction psi1;  // case 2: free symbol; case 3: member of alpha conj(theta) H-inf
  CircleFunction psi3;  // case 3: free symbol
  CircleFunction psi4;  // case 1: free symbol; case 3: analytic symbol
};

struct KmutantSymbols {
  CircleFunction psi1, psi2, psi3, psi4;
};

/// Derives the dependent symbols for the given structure case. Throws
/// CaseMismatch when theta(0)/alpha(0) contradict the case.
KmutantSymbols kmutant_symbols(const KmutantInput& input, const BlaschkeProduct& theta,
                               const BlaschkeProduct& alpha, int grid);

/// Builds the intertwining block operator of the given case.
DualBlockOperator kmutant_build(const KmutantInput& input, const BlaschkeProduct& theta,
                                const BlaschkeProduct& alpha, const LaurentWindow& window,
                                KmutantSymbols* symbols_out = nullptr);

struct C18Result {
  double residual[4] = {0, 0, 0, 0};
  cd c = 0.0;
  double max_residual() const;
};

/// Residuals of the four scalar conditions equivalent to the dual
/// intertwining relation, with the constant fitted on the zeroth coefficient.
C18Result c18_conditions(const CircleFunction& psi1, const CircleFunction& psi2,
                         const CircleFunction& psi3, const CircleFunction& psi4,
                         const BlaschkeProduct& theta, const BlaschkeProduct& alpha);

}  // namespace mskit
