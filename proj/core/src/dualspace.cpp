#include "mskit/dualspace.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace mskit {

namespace {

constexpr double kValueTol = 1e-12;
constexpr int kGuardMargin = 8;

CircleFunction kernel_at_zero_fn(const BlaschkeProduct& b, const CircleFunction& bc) {
  return CircleFunction::constant(1.0, bc.grid_size()) + bc * cd(-std::conj(b.at_zero()));
}

CircleFunction on_grid(const CircleFunction& f, int n) {
  if (f.grid_size() == 0) return CircleFunction::constant(0.0, n);
  return f.grid_size() == n ? f : f.resampled(n);
}

int banded(const CircleFunction& f) { return f.norm() < 1e-14 ? 0 : f.effective_band(1e-12); }

}  // namespace

void LaurentWindow::validate() const {
  if (lo >= 0 || hi <= 0) throw WindowTooSmall("laurent window needs lo < 0 < hi");
  if (grid < 4 || (grid & (grid - 1)) != 0)
    throw GridMismatch("laurent window grid must be a power of two >= 4");
  if (hi - lo >= grid / 2) throw WindowTooSmall("laurent window wider than the grid resolves");
  if (guard < 0 || (guard > 0 && guard >= std::min(-lo, hi) / 2))
    throw WindowTooSmall("guard must stay below min(|lo|, hi)/2");
}

LaurentWindow LaurentWindow::doubled() const {
  return LaurentWindow{2 * lo, 2 * hi, guard == 0 ? 0 : 2 * guard, 2 * grid};
}

DualSections::DualSections(const BlaschkeProduct& theta, const LaurentWindow& window)
    : theta_(theta), window_(window), theta_circle_(theta.to_circle(window.grid)) {
  window_.validate();
  band_ = theta_circle_.effective_band(1e-13);
  k_ = window_.hi - band_;
  if (k_ < 4) throw WindowTooSmall("window cannot hold an analytic section past the symbol band");
}

Eigen::VectorXcd DualSections::project(const CircleFunction& f) const {
  if (f.grid_size() != window_.grid) throw GridMismatch("dual projection expects the window grid");
  Eigen::VectorXcd out(total());
  CircleFunction tf = theta_circle_.conj() * f;
  for (int j = 0; j < k_; ++j) out[j] = tf.coeff(j);
  for (int m = 1; m <= minus_count(); ++m) out[k_ + m - 1] = f.coeff(-m);
  return out;
}

CircleFunction DualSections::synthesize(const Eigen::VectorXcd& coords) const {
  if (coords.size() != total()) throw GridMismatch("coordinate count does not match the sections");
  Eigen::VectorXcd mc = Eigen::VectorXcd::Zero(minus_count());
  for (int m = 1; m <= minus_count(); ++m) mc[minus_count() - m] = coords[k_ + m - 1];
  CircleFunction minus = CircleFunction::from_coefficients(window_.lo, mc, window_.grid);
  CircleFunction poly = CircleFunction::from_coefficients(0, coords.head(k_), window_.grid);
  return theta_circle_ * poly + minus;
}

CircleFunction DualSections::section_function(int idx) const {
  if (idx < 0 || idx >= total()) throw GridMismatch("section index out of range");
  if (idx < k_) return theta_circle_ * CircleFunction::monomial(idx, window_.grid);
  return CircleFunction::monomial(-(idx - k_ + 1), window_.grid);
}

std::vector<int> DualSections::interior_indices(int guard) const {
  std::vector<int> idx;
  for (int j = 0; j < k_ && j + band_ + guard <= window_.hi; ++j) idx.push_back(j);
  for (int m = 1; m + guard <= minus_count(); ++m) idx.push_back(k_ + m - 1);
  return idx;
}

SpaceTag DualSections::tag() const {
  std::ostringstream os;
  os.precision(17);
  os << "Kperp[";
  for (const auto& z : theta_.zeros())
    os << z.point.real() << "," << z.point.imag() << "x" << z.multiplicity << ";";
  os << "]@" << window_.lo << ":" << window_.hi << ":" << window_.grid;
  return SpaceTag{os.str(), total()};
}

DualBlockOperator::DualBlockOperator(DualSections domain, DualSections codomain,
                                     Eigen::MatrixXcd t_hat, Eigen::MatrixXcd gamma_check,
                                     Eigen::MatrixXcd gamma_hat, Eigen::MatrixXcd t_check,
                                     int symbol_band)
    : domain_(std::move(domain)),
      codomain_(std::move(codomain)),
      t_hat_(std::move(t_hat)),
      gamma_check_(std::move(gamma_check)),
      gamma_hat_(std::move(gamma_hat)),
      t_check_(std::move(t_check)),
      symbol_band_(symbol_band) {
  const LaurentWindow& dw = domain_.window();
  const LaurentWindow& cw = codomain_.window();
  if (dw.lo != cw.lo || dw.hi != cw.hi || dw.grid != cw.grid)
    throw GridMismatch("dual operator blocks need matching windows");
  int kd = domain_.analytic_count(), ld = domain_.minus_count();
  int kc = codomain_.analytic_count(), lc = codomain_.minus_count();
  if (t_hat_.rows() != kc || t_hat_.cols() != kd || gamma_check_.rows() != kc ||
      gamma_check_.cols() != ld || gamma_hat_.rows() != lc || gamma_hat_.cols() != kd ||
      t_check_.rows() != lc || t_check_.cols() != ld)
    throw GridMismatch("block dimensions do not match the sections");
}

Eigen::MatrixXcd DualBlockOperator::assembled() const {
  int kd = domain_.analytic_count(), ld = domain_.minus_count();
  int kc = codomain_.analytic_count(), lc = codomain_.minus_count();
  Eigen::MatrixXcd m(kc + lc, kd + ld);
  m.topLeftCorner(kc, kd) = t_hat_;
  m.topRightCorner(kc, ld) = gamma_check_;
  m.bottomLeftCorner(lc, kd) = gamma_hat_;
  m.bottomRightCorner(lc, ld) = t_check_;
  return m;
}

DualBlockOperator blocks_from_symbols(const CircleFunction& psi1, const CircleFunction& psi2,
                                      const CircleFunction& psi3, const CircleFunction& psi4,
                                      const BlaschkeProduct& theta, const BlaschkeProduct& alpha,
                                      const LaurentWindow& window) {
  window.validate();
  int n = window.grid;
  DualSections dom(theta, window);
  DualSections cod(alpha, window);
  CircleFunction p1 = on_grid(psi1, n), p2 = on_grid(psi2, n);
  CircleFunction p3 = on_grid(psi3, n), p4 = on_grid(psi4, n);
  const CircleFunction& tc = dom.theta_circle();
  const CircleFunction& ac = cod.theta_circle();
  CircleFunction s1 = ac.conj() * tc * p1;
  CircleFunction s2 = ac.conj() * p2;
  CircleFunction s3 = tc * p3;
  const CircleFunction& s4 = p4;

  int kd = dom.analytic_count(), kc = cod.analytic_count(), l = dom.minus_count();
  Eigen::MatrixXcd t_hat(kc, kd), gamma_check(kc, l), gamma_hat(l, kd), t_check(l, l);
  for (int i = 0; i < kc; ++i)
    for (int j = 0; j < kd; ++j) t_hat(i, j) = s1.coeff(i - j);
  for (int i = 0; i < kc; ++i)
    for (int c = 0; c < l; ++c) gamma_check(i, c) = s2.coeff(i + c + 1);
  for (int r = 0; r < l; ++r)
    for (int j = 0; j < kd; ++j) gamma_hat(r, j) = s3.coeff(-(r + 1) - j);
  for (int r = 0; r < l; ++r)
    for (int c = 0; c < l; ++c) t_check(r, c) = s4.coeff(c - r);

  int band = std::max({banded(s1), banded(s2), banded(s3), banded(s4)});
  return DualBlockOperator(std::move(dom), std::move(cod), std::move(t_hat),
                           std::move(gamma_check), std::move(gamma_hat), std::move(t_check), band);
}

DualBlockOperator dtto_blocks(const CircleFunction& phi, const BlaschkeProduct& theta,
                              const BlaschkeProduct& alpha, const LaurentWindow& window) {
  return blocks_from_symbols(phi, phi, phi, phi, theta, alpha, window);
}

DualBlockOperator dz_block(const BlaschkeProduct& theta, const LaurentWindow& window) {
  window.validate();
  DualSections s(theta, window);
  int k = s.analytic_count(), l = s.minus_count();
  Eigen::MatrixXcd t_hat = Eigen::MatrixXcd::Zero(k, k);
  for (int i = 1; i < k; ++i) t_hat(i, i - 1) = 1.0;
  Eigen::MatrixXcd gamma_check = Eigen::MatrixXcd::Zero(k, l);
  gamma_check(0, 0) = std::conj(theta.at_zero());
  Eigen::MatrixXcd gamma_hat = Eigen::MatrixXcd::Zero(l, k);
  Eigen::MatrixXcd t_check = Eigen::MatrixXcd::Zero(l, l);
  for (int r = 0; r + 1 < l; ++r) t_check(r, r + 1) = 1.0;
  DualSections cod = s;
  return DualBlockOperator(std::move(s), std::move(cod), std::move(t_hat), std::move(gamma_check),
                           std::move(gamma_hat), std::move(t_check), 1);
}

namespace {

/// Guard actually used by the interior identities: explicit window guard when
/// set (rejected if below the decay requirement), otherwise symbol band plus
/// the larger inner-function band plus the shift step and a safety margin.
int effective_guard(const DualBlockOperator& d) {
  int need = d.symbol_band() +
             std::max(d.domain().theta_band(), d.codomain().theta_band()) + 1 + kGuardMargin;
  const LaurentWindow& w = d.domain().window();
  int g = w.guard;
  if (g == 0)
    g = need;
  else if (g < need)
    throw WindowTooSmall("window guard below the symbol decay length");
  if (g >= std::min(-w.lo, w.hi) / 2)
    throw WindowTooSmall("required guard exceeds half the window");
  return g;
}

// D Dz^theta - Dz^alpha D assembled without dense products: Dz has two
// shifted-identity blocks and one corner entry, so both products are column
// and row gathers of D.
Eigen::MatrixXcd dual_commutator(const DualBlockOperator& d) {
  Eigen::MatrixXcd dm = d.assembled();
  int kd = d.domain().analytic_count(), ld = d.domain().minus_count();
  int kc = d.codomain().analytic_count(), lc = d.codomain().minus_count();
  cd t0 = d.domain().inner_function().at_zero();
  cd a0 = d.codomain().inner_function().at_zero();

  Eigen::MatrixXcd right = Eigen::MatrixXcd::Zero(dm.rows(), dm.cols());
  for (int j = 0; j + 1 < kd; ++j) right.col(j) = dm.col(j + 1);
  if (ld >= 1) right.col(kd) = std::conj(t0) * dm.col(0);
  for (int m = 2; m <= ld; ++m) right.col(kd + m - 1) = dm.col(kd + m - 2);

  Eigen::MatrixXcd left = Eigen::MatrixXcd::Zero(dm.rows(), dm.cols());
  for (int i = 1; i < kc; ++i) left.row(i) = dm.row(i - 1);
  if (lc >= 1) left.row(0) = std::conj(a0) * dm.row(kc);
  for (int m = 1; m + 1 <= lc; ++m) left.row(kc + m - 1) = dm.row(kc + m);
  return right - left;
}

double interior_max_col(const Eigen::MatrixXcd& m, const DualSections& dom, int guard) {
  std::vector<int> idx = dom.interior_indices(guard);
  if (idx.empty()) throw WindowTooSmall("no interior columns left at the required guard");
  double r = 0.0;
  for (int j : idx) r = std::max(r, m.col(j).norm());
  return r;
}

}  // namespace

LaurentWindow fitted_window(const BlaschkeProduct& theta, const BlaschkeProduct& alpha,
                            int symbol_band, LaurentWindow base) {
  LaurentWindow w = base;
  for (int attempt = 0; attempt < 6; ++attempt, w = w.doubled()) {
    try {
      DualSections dom(theta, w);
      DualSections cod(alpha, w);
      // Dominates the guard later derived from measured product bands: the
      // products couple the symbol band with both inner-function bands.
      int need = symbol_band + dom.theta_band() + cod.theta_band() +
                 std::max(dom.theta_band(), cod.theta_band()) + 1 + 3 * kGuardMargin;
      if (need >= std::min(-w.lo, w.hi) / 2) continue;
      if (dom.interior_indices(need).empty() || cod.interior_indices(need).empty()) continue;
      return w;
    } catch (const WindowTooSmall&) {
    }
  }
  throw WindowTooSmall("no window accommodates the symbol decay length");
}

double dual_intertwine_residual(const DualBlockOperator& d) {
  return interior_max_col(dual_commutator(d), d.domain(), effective_guard(d));
}

double interior_commutator_residual(const CircleFunction& phi, const BlaschkeProduct& theta,
                                    const BlaschkeProduct& alpha, const LaurentWindow& window) {
  return dual_intertwine_residual(dtto_blocks(phi, theta, alpha, window));
}

double model_projection_residual(const CircleFunction& f, const BlaschkeProduct& u,
                                 const BlaschkeProduct& b) {
  double fn = f.norm();
  if (fn < 1e-14) return 0.0;
  if (b.is_unit()) return 1.0;
  int n = f.grid_size();
  ModelBasis mb(b, n);
  Eigen::MatrixXcd span = u.to_circle(n).samples().asDiagonal() * mb.sample_matrix();
  Eigen::VectorXcd coords = span.adjoint() * f.samples() / static_cast<double>(n);
  double err = (f.samples() - span * coords).norm() / std::sqrt(static_cast<double>(n));
  return err / fn;
}

IdattoCase idatto_classify(const CircleFunction& phi, const BlaschkeProduct& theta,
                           const BlaschkeProduct& alpha, double tol) {
  bool t0_zero = std::abs(theta.at_zero()) < kValueTol;
  bool a0_zero = std::abs(alpha.at_zero()) < kValueTol;
  if (t0_zero && a0_zero) {
    BlaschkeProduct g = BlaschkeProduct::gcd(alpha, theta);
    if (model_projection_residual(phi, alpha / g, BlaschkeProduct::monomial(1) * g) < tol)
      return IdattoCase::case1;
  }
  if (BlaschkeProduct::same_zero_multiset(alpha, theta)) {
    int n = phi.grid_size();
    CircleFunction k0 = kernel_at_zero_fn(theta, theta.to_circle(n));
    if (model_projection_residual(phi * k0, BlaschkeProduct::unit(),
                                  BlaschkeProduct::monomial(1) * theta) < tol)
      return IdattoCase::case2;
  }
  return IdattoCase::none;
}

double rank2_identity_residual(const CircleFunction& phi, const BlaschkeProduct& theta,
                               const BlaschkeProduct& alpha, const LaurentWindow& window) {
  DualBlockOperator d = dtto_blocks(phi, theta, alpha, window);
  Eigen::MatrixXcd m = dual_commutator(d);
  const DualSections& dom = d.domain();
  const DualSections& cod = d.codomain();
  int n = window.grid;
  CircleFunction ph = on_grid(phi, n);
  ModelBasis mbt(theta, n), mba(alpha, n);
  CircleFunction k0a = kernel_at_zero_fn(alpha, cod.theta_circle());
  CircleFunction k0t = kernel_at_zero_fn(theta, dom.theta_circle());
  CircleFunction w1 =
      mbt.conjugate(mbt.apply_complement(dom.theta_circle() * cod.theta_circle().conj() * ph * k0a));
  Eigen::VectorXcd v1 = dom.project(w1);
  Eigen::VectorXcd u2 = cod.project(mba.apply_complement(ph * k0t));
  Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(cod.total());
  e0[0] = 1.0;
  Eigen::VectorXcd zb = Eigen::VectorXcd::Zero(dom.total());
  zb[dom.analytic_count()] = 1.0;
  Eigen::MatrixXcd r = e0 * v1.adjoint() - u2 * zb.adjoint();
  return interior_max_col(m - r, dom, effective_guard(d));
}

double shift_invariance_residual(const DualBlockOperator& d) {
  Eigen::MatrixXcd m = d.assembled();
  int kd = d.domain().analytic_count(), ld = d.domain().minus_count();
  int kc = d.codomain().analytic_count(), lc = d.codomain().minus_count();
  // Index of M_z applied to a section vector, or -1 when the image leaves the
  // sections (top analytic slot) or the vector has a conj(z) component.
  auto shifted = [](int idx, int k, int l) -> int {
    if (idx < k) return idx + 1 < k ? idx + 1 : -1;
    int km = idx - k + 1;
    if (km == 1 || km > l) return -1;
    return k + km - 2;
  };
  double r = 0.0;
  for (int j = 0; j < kd + ld; ++j) {
    int sj = shifted(j, kd, ld);
    if (sj < 0) continue;
    for (int i = 0; i < kc + lc; ++i) {
      int si = shifted(i, kc, lc);
      if (si < 0) continue;
      r = std::max(r, std::abs(m(si, sj) - m(i, j)));
    }
  }
  return r;
}

KmutantSymbols kmutant_symbols(const KmutantInput& input, const BlaschkeProduct& theta,
                               const BlaschkeProduct& alpha, int grid) {
  int n = grid > 0 ? grid : kDefaultGrid;
  cd t0 = theta.at_zero(), a0 = alpha.at_zero();
  bool t0_zero = std::abs(t0) < kValueTol, a0_zero = std::abs(a0) < kValueTol;
  CircleFunction tc = theta.to_circle(n), ac = alpha.to_circle(n);
  KmutantSymbols out;
  switch (input.case_id) {
    case 1: {
      if (t0_zero) throw CaseMismatch("case 1 needs theta(0) != 0");
      CircleFunction p4 = on_grid(input.psi4, n);
      out.psi4 = p4;
      out.psi1 = (std::conj(a0) / std::conj(t0)) * (ac * tc.conj() * p4);
      out.psi2 = std::conj(a0) * (ac * p4.p_plus());
      out.psi3 = (1.0 / std::conj(t0)) * (tc.conj() * p4.p_minus());
      break;
    }
    case 2: {
      if (!t0_zero || a0_zero) throw CaseMismatch("case 2 needs theta(0) = 0, alpha(0) != 0");
      CircleFunction p1 = on_grid(input.psi1, n);
      out.psi1 = p1;
      out.psi2 = CircleFunction::constant(0.0, n);
      out.psi3 = (1.0 / std::conj(a0)) * (tc.conj() * (ac.conj() * tc * p1).p_minus());
      out.psi4 = CircleFunction::constant(0.0, n);
      break;
    }
    case 3: {
      if (!t0_zero || !a0_zero) throw CaseMismatch("case 3 needs theta(0) = alpha(0) = 0");
      out.psi1 = on_grid(input.psi1, n);
      out.psi2 = CircleFunction::constant(0.0, n);
      out.psi3 = on_grid(input.psi3, n);
      out.psi4 = on_grid(input.psi4, n);
      break;
    }
    default:
      throw CaseMismatch("case id must be 1, 2, or 3");
  }
  return out;
}

DualBlockOperator kmutant_build(const KmutantInput& input, const BlaschkeProduct& theta,
                                const BlaschkeProduct& alpha, const LaurentWindow& window,
                                KmutantSymbols* symbols_out) {
  KmutantSymbols s = kmutant_symbols(input, theta, alpha, window.grid);
  if (symbols_out) *symbols_out = s;
  return blocks_from_symbols(s.psi1, s.psi2, s.psi3, s.psi4, theta, alpha, window);
}

double C18Result::max_residual() const { return *std::max_element(residual, residual + 4); }

C18Result c18_conditions(const CircleFunction& psi1, const CircleFunction& psi2,
                         const CircleFunction& psi3, const CircleFunction& psi4,
                         const BlaschkeProduct& theta, const BlaschkeProduct& alpha) {
  int n = std::max({psi1.grid_size(), psi2.grid_size(), psi3.grid_size(), psi4.grid_size()});
  if (n == 0) n = kDefaultGrid;
  CircleFunction p1 = on_grid(psi1, n), p2 = on_grid(psi2, n);
  CircleFunction p3 = on_grid(psi3, n), p4 = on_grid(psi4, n);
  CircleFunction tc = theta.to_circle(n), ac = alpha.to_circle(n);
  cd t0c = std::conj(theta.at_zero()), a0c = std::conj(alpha.at_zero());

  CircleFunction th3 = (tc * p3).p_minus();
  CircleFunction ath1 = ac.conj() * tc * p1;
  CircleFunction ap2 = (ac.conj() * p2).p_plus();
  CircleFunction t3 = ap2 - t0c * ath1.p_plus();
  CircleFunction t4 = ap2 - a0c * p4.p_plus();

  C18Result out;
  out.residual[0] = (p4.p_minus() - t0c * th3).norm();
  out.residual[1] = (ath1.p_minus() - a0c * th3).norm();
  out.c = 0.5 * (t3.coeff(0) + t4.coeff(0));
  out.residual[2] = (t3 - CircleFunction::constant(out.c, n)).norm();
  out.residual[3] = (t4 - CircleFunction::constant(out.c, n)).norm();
  return out;
}

}  // namespace mskit
