#include <doctest.h>

#include <random>

#include "mskit/dualspace.hpp"

using mskit::BlaschkeProduct;
using mskit::cd;
using mskit::CircleFunction;
using mskit::DualBlockOperator;
using mskit::DualSections;
using mskit::LaurentWindow;

namespace {

CircleFunction random_band(int neg, int pos, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXcd c(neg + pos + 1);
  for (int i = 0; i < c.size(); ++i) c[i] = cd(u(rng), u(rng));
  CircleFunction f = CircleFunction::from_coefficients(-neg, c, n);
  return f * cd(1.0 / f.norm());
}

CircleFunction kernel_at_zero(const BlaschkeProduct& b, int n) {
  return CircleFunction::constant(1.0, n) + b.to_circle(n) * cd(-std::conj(b.at_zero()));
}

// theta with theta(0) = 0.25 * (0.3 + 0.1i) != 0, fixed zeros
BlaschkeProduct theta_nonvanishing() {
  return BlaschkeProduct({{cd(0.25, 0.0), 1}, {cd(0.3, 0.1), 1}}, 1.0);
}

BlaschkeProduct alpha_nonvanishing() {
  return BlaschkeProduct({{cd(-0.2, 0.15), 1}}, 1.0);
}

double max_block_diff(const DualBlockOperator& a, const DualBlockOperator& b) {
  return std::max({(a.t_hat() - b.t_hat()).norm(), (a.gamma_check() - b.gamma_check()).norm(),
                   (a.gamma_hat() - b.gamma_hat()).norm(), (a.t_check() - b.t_check()).norm()});
}

}  // namespace

TEST_CASE("window validation and doubling") {
  LaurentWindow w;
  CHECK_NOTHROW(w.validate());
  LaurentWindow d = w.doubled();
  CHECK(d.lo == 2 * w.lo);
  CHECK(d.hi == 2 * w.hi);
  CHECK(d.grid == 2 * w.grid);

  LaurentWindow bad = w;
  bad.lo = 5;
  CHECK_THROWS_AS(bad.validate(), mskit::WindowTooSmall);
  bad = w;
  bad.hi = -3;
  CHECK_THROWS_AS(bad.validate(), mskit::WindowTooSmall);
  bad = w;
  bad.guard = 200;  // >= min(|lo|, hi)/2
  CHECK_THROWS_AS(bad.validate(), mskit::WindowTooSmall);
  bad = w;
  bad.grid = 3000;
  CHECK_THROWS_AS(bad.validate(), mskit::GridMismatch);
  bad = w;
  bad.lo = -bad.grid;
  bad.hi = bad.grid;
  CHECK_THROWS_AS(bad.validate(), mskit::WindowTooSmall);
}

TEST_CASE("dual sections are orthonormal and index as documented") {
  BlaschkeProduct theta = BlaschkeProduct::monomial(1);
  LaurentWindow w;
  w.lo = -16;
  w.hi = 24;
  w.grid = 256;
  DualSections s(theta, w);
  CHECK(s.theta_band() == 1);
  CHECK(s.analytic_count() == 23);
  CHECK(s.minus_count() == 16);
  CHECK(s.total() == 39);

  // theta z^0 = z
  CHECK(std::abs(s.section_function(0).coeff(1) - 1.0) < 1e-13);
  // first minus section is z^-1
  CHECK(std::abs(s.section_function(s.analytic_count()).coeff(-1) - 1.0) < 1e-13);

  for (int idx : {0, 5, s.analytic_count(), s.total() - 1}) {
    Eigen::VectorXcd e = s.project(s.section_function(idx));
    CHECK(std::abs(e[idx] - 1.0) < 1e-12);
    e[idx] = 0.0;
    CHECK(e.norm() < 1e-12);
  }

  Eigen::VectorXcd coords = Eigen::VectorXcd::Random(s.total());
  CircleFunction f = s.synthesize(coords);
  CHECK((s.project(f) - coords).norm() < 1e-11);
  CHECK_THROWS_AS(s.project(CircleFunction::constant(1.0, 64)), mskit::GridMismatch);

  std::vector<int> inner = s.interior_indices(6);
  for (int idx : inner) {
    if (idx < s.analytic_count())
      CHECK(idx + s.theta_band() + 6 <= w.hi);
    else
      CHECK((idx - s.analytic_count() + 1) + 6 <= -w.lo);
  }
}

TEST_CASE("compressed shift block equals the shared-symbol fill at z") {
  BlaschkeProduct theta = theta_nonvanishing();
  LaurentWindow w = mskit::fitted_window(theta, theta, 1);
  DualBlockOperator dz = mskit::dz_block(theta, w);
  DualBlockOperator viaz =
      mskit::dtto_blocks(CircleFunction::monomial(1, w.grid), theta, theta, w);
  CHECK(max_block_diff(dz, viaz) < 1e-11);
  CHECK(dz.gamma_hat().norm() == 0.0);
  // the shift commutes with itself exactly
  CHECK(mskit::dual_intertwine_residual(dz) < 1e-13);
}

TEST_CASE("interior residual agrees with a dense commutator oracle") {
  BlaschkeProduct theta = BlaschkeProduct({{cd(0.08, 0.02), 1}}, 1.0);
  BlaschkeProduct alpha = BlaschkeProduct({{cd(-0.05, 0.06), 1}}, cd(0, 1));
  LaurentWindow w;
  w.guard = 60;
  CircleFunction phi = random_band(2, 2, w.grid, 7);
  DualBlockOperator d = mskit::dtto_blocks(phi, theta, alpha, w);

  Eigen::MatrixXcd dm = d.assembled();
  Eigen::MatrixXcd zt = mskit::dz_block(theta, w).assembled();
  Eigen::MatrixXcd za = mskit::dz_block(alpha, w).assembled();
  Eigen::MatrixXcd comm = za * dm - dm * zt;
  double oracle = 0.0;
  for (int j : d.domain().interior_indices(60)) oracle = std::max(oracle, comm.col(j).norm());

  CHECK(std::abs(mskit::dual_intertwine_residual(d) - oracle) < 1e-13);
}

TEST_CASE("block fill matches multiply-then-project on interior sections") {
  BlaschkeProduct theta = theta_nonvanishing();
  BlaschkeProduct alpha = alpha_nonvanishing();
  LaurentWindow w = mskit::fitted_window(theta, alpha, 4);
  CircleFunction phi = random_band(4, 4, w.grid, 11);
  DualBlockOperator d = mskit::dtto_blocks(phi, theta, alpha, w);
  Eigen::MatrixXcd dm = d.assembled();

  std::vector<int> inner = d.domain().interior_indices(40);
  REQUIRE(!inner.empty());
  for (int pick : {inner.front(), inner[inner.size() / 2], inner.back()}) {
    CircleFunction image = phi * d.domain().section_function(pick);
    Eigen::VectorXcd expect = d.codomain().project(image);
    CHECK((dm.col(pick) - expect).norm() < 1e-9);
  }
}

TEST_CASE("shift invariance detects hand-edited entries") {
  BlaschkeProduct theta = theta_nonvanishing();
  BlaschkeProduct alpha = alpha_nonvanishing();
  LaurentWindow w = mskit::fitted_window(theta, alpha, 3);
  CircleFunction phi = random_band(3, 3, w.grid, 13);
  DualBlockOperator d = mskit::dtto_blocks(phi, theta, alpha, w);
  CHECK(mskit::shift_invariance_residual(d) < 1e-12);

  Eigen::MatrixXcd t_hat = d.t_hat();
  t_hat(6, 2) += 0.5;
  DualBlockOperator bent(d.domain(), d.codomain(), t_hat, d.gamma_check(), d.gamma_hat(),
                         d.t_check(), d.symbol_band());
  CHECK(mskit::shift_invariance_residual(bent) > 1e-3);
}

TEST_CASE("block vanishing classes") {
  BlaschkeProduct theta = theta_nonvanishing();
  BlaschkeProduct alpha = alpha_nonvanishing();
  LaurentWindow w = mskit::fitted_window(theta, alpha, 8);
  const int n = w.grid;

  CircleFunction in_alpha_conj = alpha.to_circle(n) * random_band(4, 0, n, 17);
  CHECK(mskit::dtto_blocks(in_alpha_conj, theta, alpha, w).gamma_check().norm() < 1e-10);

  CircleFunction in_theta_bar = theta.to_circle(n).conj() * random_band(0, 4, n, 18);
  CHECK(mskit::dtto_blocks(in_theta_bar, theta, alpha, w).gamma_hat().norm() < 1e-10);

  CircleFunction generic = random_band(4, 4, n, 19);
  DualBlockOperator d = mskit::dtto_blocks(generic, theta, alpha, w);
  CHECK(d.t_hat().norm() > 1e-2);
  CHECK(d.t_check().norm() > 1e-2);
  CHECK(d.gamma_check().norm() > 1e-2);
  CHECK(d.gamma_hat().norm() > 1e-2);
}

TEST_CASE("commutation criterion: planted structure cases classify and commute") {
  BlaschkeProduct z1 = BlaschkeProduct::monomial(1);
  BlaschkeProduct g0 = BlaschkeProduct::factor(cd(0.2, 0.0));
  BlaschkeProduct theta = z1 * g0 * BlaschkeProduct::factor(cd(0.0, 0.3));
  BlaschkeProduct alpha = z1 * g0 * BlaschkeProduct::factor(cd(-0.25, 0.0));
  BlaschkeProduct gamma = z1 * g0;

  LaurentWindow base;
  mskit::ModelBasis mzg(z1 * gamma, base.grid);
  Eigen::VectorXcd coords(3);
  coords << cd(0.6, 0.1), cd(-0.3, 0.4), cd(0.2, -0.5);
  CircleFunction phi = (alpha / gamma).to_circle(base.grid) * mzg.synthesize(coords);

  CHECK(mskit::idatto_classify(phi, theta, alpha) == mskit::IdattoCase::case1);
  LaurentWindow w = mskit::fitted_window(theta, alpha, phi.effective_band(1e-12));
  CHECK(mskit::interior_commutator_residual(phi, theta, alpha, w) < 1e-8);
  CHECK(mskit::rank2_identity_residual(phi, theta, alpha, w) < 1e-8);
}

TEST_CASE("commutation criterion: equal inner functions up to a constant") {
  BlaschkeProduct theta = theta_nonvanishing();
  BlaschkeProduct alpha = theta.with_constant(std::polar(1.0, 0.9));
  LaurentWindow base;
  const int n0 = base.grid;

  mskit::ModelBasis mzt(BlaschkeProduct::monomial(1) * theta, n0);
  Eigen::VectorXcd coords(3);
  coords << cd(0.5, -0.2), cd(0.1, 0.7), cd(-0.4, 0.3);
  CircleFunction g = mzt.synthesize(coords);
  CircleFunction k0 = kernel_at_zero(theta, n0);
  CircleFunction phi = g * CircleFunction::from_samples(k0.samples().cwiseInverse());

  CHECK(mskit::idatto_classify(phi, theta, alpha) == mskit::IdattoCase::case2);
  LaurentWindow w = mskit::fitted_window(theta, alpha, phi.effective_band(1e-12));
  CircleFunction phin = phi.resampled(w.grid);
  CHECK(mskit::interior_commutator_residual(phin, theta, alpha, w) < 1e-8);
  CHECK(mskit::rank2_identity_residual(phin, theta, alpha, w) < 1e-8);
}

TEST_CASE("commutation criterion: generic symbols genuinely fail") {
  BlaschkeProduct theta = theta_nonvanishing();
  BlaschkeProduct alpha = alpha_nonvanishing();
  LaurentWindow w = mskit::fitted_window(theta, alpha, 5);
  CircleFunction phi = random_band(5, 5, w.grid, 23);
  CHECK(mskit::idatto_classify(phi, theta, alpha) == mskit::IdattoCase::none);
  double r0 = mskit::interior_commutator_residual(phi, theta, alpha, w);
  double r1 = mskit::interior_commutator_residual(phi, theta, alpha, w.doubled());
  CHECK(r1 > 1e-3);
  CHECK(r1 > r0 / 10.0);
  // the rank-two identity still holds for arbitrary symbols
  CHECK(mskit::rank2_identity_residual(phi, theta, alpha, w) < 1e-8);
}

TEST_CASE("projection residual onto u K_b") {
  BlaschkeProduct u = BlaschkeProduct::factor(cd(0.3, 0.0));
  BlaschkeProduct b = BlaschkeProduct::random(2, 29, 0.4);
  const int n = mskit::kDefaultGrid;
  mskit::ModelBasis mb(b, n);
  Eigen::VectorXcd coords(2);
  coords << cd(1.0, -0.5), cd(0.3, 0.3);
  CircleFunction inside = u.to_circle(n) * mb.synthesize(coords);
  CHECK(mskit::model_projection_residual(inside, u, b) < 1e-10);
  CHECK(mskit::model_projection_residual(random_band(2, 2, n, 31), u, b) > 1e-2);
  CHECK(mskit::model_projection_residual(CircleFunction::constant(0.0, n), u, b) == 0.0);
  CHECK(mskit::model_projection_residual(CircleFunction::constant(1.0, n), u,
                                         BlaschkeProduct::unit()) == 1.0);
}

TEST_CASE("derived symbols of the nonvanishing case match their closed forms") {
  BlaschkeProduct theta = theta_nonvanishing();
  BlaschkeProduct alpha = alpha_nonvanishing();
  const cd t0 = theta.at_zero();
  const cd a0 = alpha.at_zero();
  LaurentWindow base;
  const int n = base.grid;
  CircleFunction tc = theta.to_circle(n), ac = alpha.to_circle(n);
  CircleFunction zm1 = CircleFunction::monomial(-1, n);

  auto derive = [&](const CircleFunction& psi4) {
    mskit::KmutantInput in;
    in.case_id = 1;
    in.psi4 = psi4;
    return mskit::kmutant_symbols(in, theta, alpha, n);
  };

  {  // psi4 = theta
    mskit::KmutantSymbols s = derive(tc);
    CHECK((s.psi1 - (std::conj(a0) / std::conj(t0)) * ac).norm() < 1e-12);
    CHECK((s.psi2 - std::conj(a0) * (ac * tc)).norm() < 1e-12);
    CHECK(s.psi3.norm() < 1e-12);
  }
  {  // psi4 = conj(z)
    mskit::KmutantSymbols s = derive(zm1);
    CHECK((s.psi1 - (std::conj(a0) / std::conj(t0)) * (ac * tc.conj() * zm1)).norm() < 1e-12);
    CHECK(s.psi2.norm() < 1e-12);
    CHECK((s.psi3 - (1.0 / std::conj(t0)) * (tc.conj() * zm1)).norm() < 1e-12);
  }
  {  // psi4 = conj(z) theta
    mskit::KmutantSymbols s = derive(zm1 * tc);
    CircleFunction analytic_part = (tc + CircleFunction::constant(-t0, n)) * zm1;
    CHECK((s.psi2 - std::conj(a0) * (ac * analytic_part)).norm() < 1e-12);
    // pinned orientation: the middle factor is alpha, not its conjugate
    CHECK((s.psi2 - std::conj(a0) * (ac.conj() * analytic_part)).norm() > 1e-2);
    CHECK((s.psi3 - (t0 / std::conj(t0)) * (tc.conj() * zm1)).norm() < 1e-12);
  }

  // every construction intertwines and satisfies the scalar system
  for (const CircleFunction& psi4 : {tc, zm1, zm1 * tc}) {
    mskit::KmutantInput in;
    in.case_id = 1;
    in.psi4 = psi4;
    LaurentWindow w = mskit::fitted_window(theta, alpha, 8);
    mskit::KmutantSymbols syms;
    DualBlockOperator d = mskit::kmutant_build(in, theta, alpha, w, &syms);
    CHECK(mskit::dual_intertwine_residual(d) < 1e-8);
    mskit::C18Result c18 =
        mskit::c18_conditions(syms.psi1, syms.psi2, syms.psi3, syms.psi4, theta, alpha);
    for (double r : c18.residual) CHECK(r < 1e-10);
  }
}

TEST_CASE("vanishing-at-zero cases: derived symbols and intertwining") {
  // theta(0) = 0, alpha(0) != 0
  BlaschkeProduct theta = BlaschkeProduct::monomial(1) * BlaschkeProduct::factor(cd(0.2, -0.1));
  BlaschkeProduct alpha = alpha_nonvanishing();
  const cd a0 = alpha.at_zero();
  LaurentWindow base;
  const int n = base.grid;
  CircleFunction tc = theta.to_circle(n), ac = alpha.to_circle(n);
  CircleFunction zm1 = CircleFunction::monomial(-1, n);

  auto derive2 = [&](const CircleFunction& psi1) {
    mskit::KmutantInput in;
    in.case_id = 2;
    in.psi1 = psi1;
    return mskit::kmutant_symbols(in, theta, alpha, n);
  };

  {  // psi1 = alpha: a plain analytic-symbol block row
    mskit::KmutantSymbols s = derive2(ac);
    CHECK(s.psi3.norm() < 1e-12);
    CHECK(s.psi2.norm() == 0.0);
    CHECK(s.psi4.norm() == 0.0);
  }
  {  // psi1 = conj(theta)
    mskit::KmutantSymbols s = derive2(tc.conj());
    CircleFunction expect =
        tc.conj() * (ac.conj() * cd(1.0 / std::conj(a0)) - CircleFunction::constant(1.0, n));
    CHECK((s.psi3 - expect).norm() < 1e-11);
  }
  {  // psi1 = conj(z theta)
    mskit::KmutantSymbols s = derive2(zm1 * tc.conj());
    CircleFunction expect = (1.0 / std::conj(a0)) * (zm1 * ac.conj() * tc.conj());
    CHECK((s.psi3 - expect).norm() < 1e-11);
  }

  for (const CircleFunction& psi1 : {ac, tc.conj(), zm1 * tc.conj()}) {
    mskit::KmutantInput in;
    in.case_id = 2;
    in.psi1 = psi1;
    LaurentWindow w = mskit::fitted_window(theta, alpha, 8);
    mskit::KmutantSymbols syms;
    DualBlockOperator d = mskit::kmutant_build(in, theta, alpha, w, &syms);
    CHECK(mskit::dual_intertwine_residual(d) < 1e-8);
    CHECK(mskit::c18_conditions(syms.psi1, syms.psi2, syms.psi3, syms.psi4, theta, alpha)
              .max_residual() < 1e-9);
  }

  // both vanish at zero: free pieces in their stated classes
  BlaschkeProduct theta3 = BlaschkeProduct::monomial(1) * BlaschkeProduct::factor(cd(0.15, 0.1));
  BlaschkeProduct alpha3 = BlaschkeProduct::monomial(1) * BlaschkeProduct::factor(cd(-0.1, 0.2));
  CircleFunction t3 = theta3.to_circle(n), a3 = alpha3.to_circle(n);
  CircleFunction chi1 = random_band(0, 3, n, 41);
  CircleFunction chi3 = random_band(0, 3, n, 42);
  CircleFunction chi4 = random_band(0, 3, n, 43);
  LaurentWindow w3 = mskit::fitted_window(theta3, alpha3, 10);

  struct Piece {
    mskit::KmutantInput in;
    int nonzero_block;
  };
  std::vector<Piece> pieces(3);
  pieces[0].in.case_id = 3;
  pieces[0].in.psi1 = a3 * t3.conj() * chi1;
  pieces[0].nonzero_block = 0;
  pieces[1].in.case_id = 3;
  pieces[1].in.psi3 = t3.conj() * chi3.conj();
  pieces[1].nonzero_block = 2;
  pieces[2].in.case_id = 3;
  pieces[2].in.psi4 = chi4;
  pieces[2].nonzero_block = 3;

  for (const Piece& p : pieces) {
    mskit::KmutantSymbols syms;
    DualBlockOperator d = mskit::kmutant_build(p.in, theta3, alpha3, w3, &syms);
    CHECK(mskit::dual_intertwine_residual(d) < 1e-8);
    CHECK(mskit::c18_conditions(syms.psi1, syms.psi2, syms.psi3, syms.psi4, theta3, alpha3)
              .max_residual() < 1e-9);
    double norms[4] = {d.t_hat().norm(), d.gamma_check().norm(), d.gamma_hat().norm(),
                       d.t_check().norm()};
    for (int b = 0; b < 4; ++b) {
      if (b == p.nonzero_block)
        CHECK(norms[b] > 1e-3);
      else
        CHECK(norms[b] < 1e-10);
    }
  }

  // the lower-right corner alone also intertwines for analytic psi4 = theta
  DualBlockOperator corner = mskit::blocks_from_symbols(
      CircleFunction::constant(0.0, w3.grid), CircleFunction::constant(0.0, w3.grid),
      CircleFunction::constant(0.0, w3.grid), theta3.to_circle(w3.grid), theta3, alpha3, w3);
  CHECK(mskit::dual_intertwine_residual(corner) < 1e-8);
}

TEST_CASE("case preconditions are enforced") {
  BlaschkeProduct vanishing = BlaschkeProduct::monomial(1);
  BlaschkeProduct nonvanishing = theta_nonvanishing();
  const int n = 256;
  mskit::KmutantInput in;
  in.case_id = 1;
  CHECK_THROWS_AS(mskit::kmutant_symbols(in, vanishing, nonvanishing, n), mskit::CaseMismatch);
  in.case_id = 2;
  CHECK_THROWS_AS(mskit::kmutant_symbols(in, nonvanishing, nonvanishing, n), mskit::CaseMismatch);
  CHECK_THROWS_AS(mskit::kmutant_symbols(in, vanishing, vanishing, n), mskit::CaseMismatch);
  in.case_id = 3;
  CHECK_THROWS_AS(mskit::kmutant_symbols(in, nonvanishing, vanishing, n), mskit::CaseMismatch);
  in.case_id = 9;
  CHECK_THROWS_AS(mskit::kmutant_symbols(in, vanishing, vanishing, n), mskit::CaseMismatch);
}

TEST_CASE("scalar system on pinned instances") {
  BlaschkeProduct theta = theta_nonvanishing();
  BlaschkeProduct alpha = alpha_nonvanishing();
  const int n = mskit::kDefaultGrid;
  CircleFunction zero = CircleFunction::constant(0.0, n);

  // psi4 = theta with every other symbol zero: only the last condition breaks
  mskit::C18Result bad = mskit::c18_conditions(zero, zero, zero, theta.to_circle(n), theta, alpha);
  CHECK(bad.residual[3] > 1e-3);
  CHECK(bad.residual[0] < 1e-12);
  CHECK(bad.residual[1] < 1e-12);

  mskit::C18Result trivial = mskit::c18_conditions(zero, zero, zero, zero, theta, alpha);
  CHECK(trivial.max_residual() == 0.0);
  CHECK(trivial.c == cd(0.0, 0.0));
}

TEST_CASE("shared-symbol form is not recoverable for the remark operator") {
  BlaschkeProduct theta = theta_nonvanishing();
  BlaschkeProduct alpha = theta.with_constant(std::polar(1.0, 2.1));
  LaurentWindow w = mskit::fitted_window(theta, alpha, 10);
  const int n = w.grid;
  CircleFunction tc = theta.to_circle(n);
  CircleFunction psi2 = std::conj(theta.at_zero()) * (tc * tc);
  CircleFunction zero = CircleFunction::constant(0.0, n);

  DualBlockOperator d = mskit::blocks_from_symbols(tc, psi2, zero, tc, theta, alpha, w);
  CHECK(mskit::dual_intertwine_residual(d) < 1e-8);

  DualBlockOperator shared = mskit::dtto_blocks(tc, theta, alpha, w);
  CHECK((d.t_hat() - shared.t_hat()).norm() < 1e-10);
  CHECK((d.t_check() - shared.t_check()).norm() < 1e-10);
  CHECK((d.gamma_hat() - shared.gamma_hat()).norm() < 1e-10);
  CHECK((d.gamma_check() - shared.gamma_check()).norm() > 1e-3);
}

TEST_CASE("fitted window grows with the symbol band and gives up eventually") {
  BlaschkeProduct theta = theta_nonvanishing();
  LaurentWindow small = mskit::fitted_window(theta, theta, 1);
  LaurentWindow wide = mskit::fitted_window(theta, theta, 120);
  CHECK(wide.hi > small.hi);
  CHECK_THROWS_AS(mskit::fitted_window(theta, theta, 1000000), mskit::WindowTooSmall);
}
