#include "mskit/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

#include "mskit/intertwine.hpp"
#include "mskit/operators.hpp"

namespace mskit {

namespace {

constexpr double kDualRadius = 0.35;
constexpr double kModelRadius = 0.9;

struct Ctx {
  std::mt19937_64 rng;
  int deg_lo = 1;
  int deg_hi = 6;
  double quadrature = 1e-10;
  double identity = 1e-9;
  double positive = 1e-8;
  double negative = 1e-3;
  double rank = 1e-10;
  double norm_tol = 1e-6;
  std::optional<LaurentWindow> window;
  bool escalated = false;
};

struct TrialOutcome {
  TrialStatus status = TrialStatus::fail;
  double residual = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t seed, const std::string& id, int index) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : id) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return mix64(h ^ mix64(seed + 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(index + 1)));
}

double unit_interval(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  if (hi <= lo) return lo;
  return lo + static_cast<int>(unit_interval(rng) * (hi - lo + 1.0));
}

bool coin(std::mt19937_64& rng) { return (rng() & 1u) != 0; }

cd unimodular(std::mt19937_64& rng) {
  double t = 2.0 * M_PI * unit_interval(rng);
  return cd(std::cos(t), std::sin(t));
}

cd disc_point(std::mt19937_64& rng, double radius) {
  double r = radius * std::sqrt(unit_interval(rng));
  return r * unimodular(rng);
}

cd separated_zero(std::mt19937_64& rng, double radius, const std::vector<cd>& avoid,
                  double sep = 1e-3) {
  for (int attempt = 0; attempt < 500; ++attempt) {
    cd z = disc_point(rng, radius);
    bool ok = true;
    for (cd a : avoid)
      if (std::abs(z - a) < sep) {
        ok = false;
        break;
      }
    if (ok) return z;
  }
  throw Error("could not place a separated zero");
}

BlaschkeProduct random_inner(std::mt19937_64& rng, int degree, double radius,
                             std::vector<cd>* used = nullptr) {
  std::vector<cd> local;
  std::vector<cd>& avoid = used ? *used : local;
  std::vector<ZeroEntry> zeros;
  for (int i = 0; i < degree; ++i) {
    cd z = separated_zero(rng, radius, avoid);
    avoid.push_back(z);
    zeros.push_back({z, 1});
  }
  return BlaschkeProduct(std::move(zeros), unimodular(rng));
}

struct PlantedPair {
  BlaschkeProduct theta = BlaschkeProduct::unit();
  BlaschkeProduct alpha = BlaschkeProduct::unit();
  BlaschkeProduct common = BlaschkeProduct::unit();
};

PlantedPair planted_pair(std::mt19937_64& rng, int dlo, int dhi, double radius,
                         int force_gcd = -1) {
  int dt = uniform_int(rng, dlo, dhi);
  int da = uniform_int(rng, dlo, dhi);
  int g = force_gcd >= 0 ? std::min(force_gcd, std::min(dt, da))
                         : uniform_int(rng, 0, std::min(dt, da));
  std::vector<cd> used;
  BlaschkeProduct common = random_inner(rng, g, radius, &used);
  BlaschkeProduct tail_t = random_inner(rng, dt - g, radius, &used);
  BlaschkeProduct tail_a = random_inner(rng, da - g, radius, &used);
  PlantedPair p;
  p.common = common;
  p.theta = common * tail_t;
  p.alpha = common * tail_a;
  return p;
}

CircleFunction random_laurent(std::mt19937_64& rng, int neg, int pos, int n) {
  Eigen::VectorXcd coef(neg + pos + 1);
  for (int i = 0; i < coef.size(); ++i)
    coef[i] = cd(2.0 * unit_interval(rng) - 1.0, 2.0 * unit_interval(rng) - 1.0);
  CircleFunction f = CircleFunction::from_coefficients(-neg, coef, n);
  double fn = f.norm();
  if (fn < 1e-9) {
    coef[neg] += 1.0;
    f = CircleFunction::from_coefficients(-neg, coef, n);
    fn = f.norm();
  }
  return f * cd(1.0 / fn);
}

CircleFunction random_analytic(std::mt19937_64& rng, int deg, int n) {
  Eigen::VectorXcd coef(deg + 1);
  for (int i = 0; i < coef.size(); ++i)
    coef[i] = cd(2.0 * unit_interval(rng) - 1.0, 2.0 * unit_interval(rng) - 1.0);
  CircleFunction f = CircleFunction::from_coefficients(0, coef, n);
  double fn = f.norm();
  if (fn < 1e-9) {
    coef[0] += 1.0;
    f = CircleFunction::from_coefficients(0, coef, n);
    fn = f.norm();
  }
  return f * cd(1.0 / fn);
}

CircleFunction random_coanalytic(std::mt19937_64& rng, int deg, int n) {
  return random_analytic(rng, deg, n).conj();
}

Eigen::VectorXcd random_coords(std::mt19937_64& rng, int d) {
  Eigen::VectorXcd v(d);
  for (int i = 0; i < d; ++i)
    v[i] = cd(2.0 * unit_interval(rng) - 1.0, 2.0 * unit_interval(rng) - 1.0);
  if (v.norm() < 1e-9) v[0] = 1.0;
  return v / v.norm();
}

CircleFunction random_model_element(std::mt19937_64& rng, const ModelBasis& mb) {
  return mb.synthesize(random_coords(rng, mb.dim()));
}

BlaschkeProduct random_nonvanishing_at_zero(std::mt19937_64& rng, int degree, double radius) {
  double mag = (0.25 + 0.5 * unit_interval(rng)) * std::pow(radius, degree);
  return BlaschkeProduct::random_with_value_at_zero(degree, rng(), mag * unimodular(rng), radius);
}

int grid_for(const BlaschkeProduct& a, const BlaschkeProduct& b, bool escalated) {
  double rho = std::max(a.spectral_radius(), b.spectral_radius());
  return default_grid(rho, escalated ? 2 * kDefaultGrid : kDefaultGrid);
}

CircleFunction kernel_at_zero_fn(const BlaschkeProduct& b, int n) {
  return CircleFunction::constant(1.0, n) + b.to_circle(n) * cd(-std::conj(b.at_zero()));
}

std::string pair_detail(const PlantedPair& p) {
  std::ostringstream os;
  os << "deg(theta)=" << p.theta.degree() << " deg(alpha)=" << p.alpha.degree()
     << " deg(gcd)=" << p.common.degree();
  return os.str();
}

TrialOutcome judge_positive(double r, const Ctx& c, std::string detail) {
  if (r < c.positive) return {TrialStatus::pass, r, c.positive, std::move(detail)};
  if (r > c.negative) return {TrialStatus::fail, r, c.positive, std::move(detail)};
  return {TrialStatus::indeterminate, r, c.positive, std::move(detail)};
}

TrialOutcome judge_small(double r, double tol, const Ctx& c, std::string detail) {
  if (r < tol) return {TrialStatus::pass, r, tol, std::move(detail)};
  if (r > c.negative && c.negative > tol) return {TrialStatus::fail, r, tol, std::move(detail)};
  if (r >= c.negative) return {TrialStatus::fail, r, tol, std::move(detail)};
  return {TrialStatus::indeterminate, r, tol, std::move(detail)};
}

// Genuine violations survive refinement; truncation artifacts collapse by at
// least a factor of ten when the window doubles.
TrialOutcome judge_negative(double r0, double r1, const Ctx& c, std::string detail) {
  if (r1 > c.negative && r1 > r0 / 10.0) return {TrialStatus::pass, r1, c.negative, std::move(detail)};
  if (r1 < c.positive)
    return {TrialStatus::fail, r1, c.negative, detail + " | residual collapsed"};
  return {TrialStatus::indeterminate, r1, c.negative, std::move(detail)};
}

double span_residual(const Eigen::MatrixXcd& m, const std::vector<Eigen::MatrixXcd>& basis) {
  Eigen::MatrixXcd rem = m;
  for (const auto& b : basis) {
    cd coef = (b.conjugate().array() * rem.array()).sum();
    rem -= coef * b;
  }
  double mn = m.norm();
  return mn > 0 ? rem.norm() / mn : 0.0;
}

LaurentWindow dual_base(const Ctx& c) {
  LaurentWindow base = c.window.value_or(LaurentWindow{});
  if (c.escalated) base = base.doubled();
  return base;
}

// ---------------------------------------------------------------- checks --

TrialOutcome check_lemma31(Ctx& c) {
  PlantedPair p = planted_pair(c.rng, c.deg_lo, c.deg_hi, kModelRadius);
  int n = grid_for(p.theta, p.alpha, c.escalated);
  IntersectionResult r = intersection_subspace(p.theta, p.alpha, n);
  std::string d = pair_detail(p);
  if (r.dim != p.common.degree())
    return {TrialStatus::fail, 1.0, c.positive, d + " | intersection dim mismatch"};
  return judge_positive(r.distance_to_lcm_gcd, c, std::move(d));
}

TrialOutcome check_eq32(Ctx& c) {
  PlantedPair p = planted_pair(c.rng, c.deg_lo, c.deg_hi, kModelRadius);
  int n = grid_for(p.theta, p.alpha, c.escalated);
  ModelBasis mt(p.theta, n), ma(p.alpha, n);
  CircleFunction phi = random_laurent(c.rng, 6, 6, n);
  CommutatorDefect def = commutator_defect(phi, mt, ma);
  return judge_small(def.formula_residual, c.identity, c, pair_detail(p));
}

TrialOutcome check_lemma33(Ctx& c) {
  PlantedPair p = planted_pair(c.rng, c.deg_lo, c.deg_hi, kModelRadius);
  int n = grid_for(p.theta, p.alpha, c.escalated);
  ModelBasis mt(p.theta, n), ma(p.alpha, n);
  BlaschkeProduct big = BlaschkeProduct::lcm(p.alpha, p.theta);
  // dim K_lcm = 1 makes the projection a multiple of k_0 for every symbol,
  // so only positive instances exist there.
  bool expect_cancel = big.degree() < 2 || coin(c.rng);
  CircleFunction phi = CircleFunction::constant(0.0, n);
  if (expect_cancel) {
    cd cc = cd(0.5 + unit_interval(c.rng), unit_interval(c.rng) - 0.5);
    CircleFunction bigc = big.to_circle(n);
    CircleFunction k0 = CircleFunction::constant(1.0, n) + bigc * cd(-std::conj(big.at_zero()));
    phi = mt.theta_circle().conj() * (cc * k0 + bigc * random_analytic(c.rng, 4, n));
  } else {
    phi = random_laurent(c.rng, 5, 5, n);
  }
  phi = phi * cd(1.0 / phi.norm());
  CancellationResult ct = cancellation_test(phi, p.theta, p.alpha, c.identity);
  CommutatorDefect def = commutator_defect(phi, mt, ma);
  double lhs = def.defect.norm();
  std::ostringstream os;
  os << pair_detail(p) << " | expect_cancel=" << (expect_cancel ? 1 : 0) << " lhs=" << lhs;
  if (ct.cancels != expect_cancel)
    return {TrialStatus::fail, ct.residual, c.identity, os.str() + " | predicted class mismatch"};
  if (ct.cancels && lhs < c.positive) return {TrialStatus::pass, lhs, c.positive, os.str()};
  if (!ct.cancels && lhs > c.negative) return {TrialStatus::pass, lhs, c.negative, os.str()};
  if (ct.cancels && lhs > c.negative)
    return {TrialStatus::fail, lhs, c.positive, os.str() + " | cancel predicted, defect large"};
  if (!ct.cancels && lhs < c.positive)
    return {TrialStatus::fail, lhs, c.negative, os.str() + " | no cancel predicted, defect small"};
  return {TrialStatus::indeterminate, lhs, c.positive, os.str()};
}

TrialOutcome intertwiner_roundtrip(Ctx& c, const PlantedPair& p) {
  int n = grid_for(p.theta, p.alpha, c.escalated);
  ModelBasis mt(p.theta, n), ma(p.alpha, n);
  IntertwinerBasis ib = solve_intertwiners(mt, ma);
  std::string d = pair_detail(p);
  if (ib.dim() != p.common.degree())
    return {TrialStatus::fail, 1.0, c.rank, d + " | solution dim mismatch"};
  double worst = 0.0;
  for (const auto& a : ib.ops) {
    CircleFunction phi = symbol_of_intertwiner(a, mt, ma, c.positive);
    worst = std::max(worst, membership_residual(phi, p.theta, p.alpha));
    OperatorMatrix rec = atto_matrix(phi, mt, ma);
    worst = std::max(worst, (rec.matrix() - a.matrix()).norm());
  }
  return judge_positive(worst, c, std::move(d));
}

TrialOutcome check_thm_inter(Ctx& c) {
  PlantedPair p = planted_pair(c.rng, c.deg_lo, c.deg_hi, kModelRadius);
  return intertwiner_roundtrip(c, p);
}

TrialOutcome check_cor_inter2(Ctx& c) {
  int scenario = uniform_int(c.rng, 0, 2);
  std::vector<cd> used;
  BlaschkeProduct base = random_inner(c.rng, uniform_int(c.rng, c.deg_lo, c.deg_hi), kModelRadius, &used);
  BlaschkeProduct extra = random_inner(c.rng, uniform_int(c.rng, 1, 3), kModelRadius, &used);
  PlantedPair p;
  p.common = base;
  if (scenario == 0) {
    p.alpha = base;
    p.theta = base * extra;
  } else if (scenario == 1) {
    p.theta = base;
    p.alpha = base * extra;
  } else {
    p.theta = base;
    p.alpha = base.with_constant(unimodular(c.rng));
  }
  return intertwiner_roundtrip(c, p);
}

TrialOutcome check_cor_coprime(Ctx& c) {
  std::vector<cd> used;
  BlaschkeProduct theta = random_inner(c.rng, uniform_int(c.rng, c.deg_lo, c.deg_hi), kModelRadius, &used);
  BlaschkeProduct alpha = random_inner(c.rng, uniform_int(c.rng, c.deg_lo, c.deg_hi), kModelRadius, &used);
  int n = grid_for(theta, alpha, c.escalated);
  ModelBasis mt(theta, n), ma(alpha, n);
  IntertwinerBasis ib = solve_intertwiners(mt, ma);
  std::ostringstream os;
  os << "deg(theta)=" << theta.degree() << " deg(alpha)=" << alpha.degree()
     << " sv_min=" << ib.singular_values.minCoeff();
  if (ib.dim() != 0) return {TrialStatus::fail, 0.0, c.rank, os.str() + " | nonzero solution"};
  return {TrialStatus::pass, ib.singular_values.minCoeff(), c.rank, os.str()};
}

TrialOutcome check_cor_star(Ctx& c) {
  PlantedPair p = planted_pair(c.rng, c.deg_lo, c.deg_hi, kModelRadius, uniform_int(c.rng, 1, 3));
  int n = grid_for(p.theta, p.alpha, c.escalated);
  ModelBasis mt(p.theta, n), ma(p.alpha, n);
  IntertwinerBasis ib = solve_intertwiners(mt, ma);
  std::string d = pair_detail(p);
  if (ib.dim() == 0) return {TrialStatus::fail, 1.0, c.rank, d + " | planted gcd lost"};
  const OperatorMatrix& a = ib.ops[uniform_int(c.rng, 0, ib.dim() - 1)];
  OperatorMatrix as = star_transform(a, mt, ma, c.positive);
  Eigen::MatrixXcd sa = compressed_shift(ma).matrix().adjoint();
  Eigen::MatrixXcd st = compressed_shift(mt).matrix().adjoint();
  std::vector<Eigen::MatrixXcd> starred = sylvester_nullspace(sa, st, nullptr, c.rank);
  if (static_cast<int>(starred.size()) != p.common.degree())
    return {TrialStatus::fail, 1.0, c.rank, d + " | starred dim mismatch"};
  return judge_positive(span_residual(as.matrix(), starred), c, std::move(d));
}

TrialOutcome check_hankel_sts(Ctx& c) {
  PlantedPair p = planted_pair(c.rng, c.deg_lo, c.deg_hi, kModelRadius, uniform_int(c.rng, 1, 3));
  BlaschkeProduct alpha = p.alpha.jsharp();  // planted pair is (theta, alpha#)
  int n = grid_for(p.theta, p.alpha, c.escalated);
  ModelBasis mt(p.theta, n), mas(p.alpha, n), ma(alpha, n);
  IntertwinerBasis ib = solve_intertwiners(mt, mas);
  std::string d = pair_detail(p);
  if (ib.dim() != p.common.degree())
    return {TrialStatus::fail, 1.0, c.rank, d + " | sharp solution dim mismatch"};
  Eigen::MatrixXcd sa = compressed_shift(ma).matrix();
  Eigen::MatrixXcd st_adj = compressed_shift(mt).matrix().adjoint();
  std::vector<Eigen::MatrixXcd> sts = sylvester_nullspace(sa, st_adj, nullptr, c.rank);
  if (sts.size() != ib.ops.size())
    return {TrialStatus::fail, 1.0, c.rank, d + " | hankel dim mismatch"};
  double worst = 0.0;
  for (const auto& a : ib.ops) {
    OperatorMatrix b = hankel_transform(a, mt, mas, ma, c.positive);
    worst = std::max(worst, span_residual(b.matrix(), sts));
  }
  return judge_positive(worst, c, std::move(d));
}

TrialOutcome check_hankel_sst(Ctx& c) {
  PlantedPair p = planted_pair(c.rng, c.deg_lo, c.deg_hi, kModelRadius, uniform_int(c.rng, 1, 3));
  BlaschkeProduct alpha = p.alpha.jsharp();
  int n = grid_for(p.theta, p.alpha, c.escalated);
  ModelBasis mt(p.theta, n), mas(p.alpha, n), ma(alpha, n);
  IntertwinerBasis ib = solve_intertwiners(mt, mas);
  std::string d = pair_detail(p);
  if (ib.dim() == 0) return {TrialStatus::fail, 1.0, c.rank, d + " | planted gcd lost"};
  Eigen::MatrixXcd flip = ma.conjugation_matrix() * jsharp_matrix(mas, ma).conjugate();
  Eigen::MatrixXcd sa_adj = compressed_shift(ma).matrix().adjoint();
  Eigen::MatrixXcd st = compressed_shift(mt).matrix();
  std::vector<Eigen::MatrixXcd> sst = sylvester_nullspace(sa_adj, st, nullptr, c.rank);
  if (sst.size() != ib.ops.size())
    return {TrialStatus::fail, 1.0, c.rank, d + " | sst dim mismatch"};
  double worst = 0.0;
  for (const auto& a : ib.ops) {
    Eigen::MatrixXcd b = flip * a.matrix();
    double rel = (sa_adj * b - b * st).norm() / std::max(1e-300, b.norm());
    worst = std::max(worst, rel);
    worst = std::max(worst, span_residual(b, sst));
  }
  return judge_positive(worst, c, std::move(d));
}

TrialOutcome check_prop21(Ctx& c) {
  PlantedPair p = planted_pair(c.rng, c.deg_lo, c.deg_hi, kModelRadius);
  int n = grid_for(p.theta, p.alpha, c.escalated);
  ModelBasis mt(p.theta, n), ma(p.alpha, n);
  CircleFunction phi = random_laurent(c.rng, 6, 6, n);
  double r1 = (atto_matrix(phi, mt, ma).matrix().adjoint() -
               atto_matrix(phi.conj(), ma, mt).matrix())
                  .norm();
  CircleFunction h = random_analytic(c.rng, 4, n);
  double r2 = atto_matrix(ma.theta_circle() * h, mt, ma).frobenius_norm();
  CircleFunction g = random_analytic(c.rng, 4, n);
  CircleFunction coker = (mt.theta_circle() * CircleFunction::monomial(1, n) * g).conj();
  double r3 = atto_matrix(coker, mt, ma).frobenius_norm();
  double worst = std::max({r1, r2, r3});
  return judge_small(worst, c.quadrature, c, pair_detail(p));
}

TrialOutcome check_lemma24(Ctx& c) {
  PlantedPair p = planted_pair(c.rng, c.deg_lo, c.deg_hi, kModelRadius);
  int n = grid_for(p.theta, p.alpha, c.escalated);
  ModelBasis mt(p.theta, n), ma(p.alpha, n);
  std::string d = pair_detail(p);
  // With dim K_theta = 1 every operator factors through k_0, so negative
  // instances only exist from dimension two up.
  if (mt.dim() < 2 || coin(c.rng)) {
    Eigen::VectorXcd coords = random_coords(c.rng, ma.dim());
    OperatorMatrix a = atto_matrix(ma.synthesize(coords), mt, ma);
    AnalyticDefect ad = analytic_defect(a, mt, ma);
    if (!ad.factorizable)
      return {TrialStatus::fail, ad.sigma1 > 0 ? ad.sigma2 / ad.sigma1 : 0.0, c.rank,
              d + " | analytic symbol not factorizable"};
    return judge_positive((ad.psi - coords).norm(), c, d + " | positive");
  }
  Eigen::VectorXcd gc = mt.project(random_model_element(c.rng, mt));
  const Eigen::VectorXcd k0 = mt.project(mt.kernel_at_zero());
  gc -= k0 * (k0.dot(gc) / k0.squaredNorm());
  gc.normalize();
  CircleFunction g = mt.synthesize(gc);
  CircleFunction phi = random_analytic(c.rng, 4, n) * cd(0.7) +
                       (CircleFunction::monomial(1, n) * g).conj();
  AnalyticDefect ad = analytic_defect(atto_matrix(phi, mt, ma), mt, ma);
  double ratio = ad.sigma1 > 0 ? ad.sigma2 / ad.sigma1 : 0.0;
  std::ostringstream os;
  os << d << " | negative ratio=" << ratio << " align=" << ad.kernel_alignment;
  if (ad.factorizable) return {TrialStatus::fail, ratio, c.rank, os.str() + " | false factorization"};
  return {TrialStatus::pass, ratio, c.rank, os.str()};
}

TrialOutcome check_prop41(Ctx& c) {
  PlantedPair p = planted_pair(c.rng, c.deg_lo, c.deg_hi, kModelRadius);
  int n = grid_for(p.theta, p.alpha, c.escalated);
  ModelBasis mt(p.theta, n), ma(p.alpha, n);
  int band = uniform_int(c.rng, 1, 8);
  CircleFunction phi = random_laurent(c.rng, band, band, n);
  double over = std::max(0.0, operator_norm(atto_matrix(phi, mt, ma)) - phi.sup_abs());
  return judge_small(over, c.identity, c, pair_detail(p));
}

TrialOutcome check_thm42(Ctx& c) {
  PlantedPair p = planted_pair(c.rng, c.deg_lo, c.deg_hi, kModelRadius, uniform_int(c.rng, 1, 3));
  int n = grid_for(p.theta, p.alpha, c.escalated);
  ModelBasis mt(p.theta, n), ma(p.alpha, n);
  IntertwinerBasis ib = solve_intertwiners(mt, ma);
  std::string d = pair_detail(p);
  if (ib.dim() == 0) return {TrialStatus::fail, 1.0, c.rank, d + " | planted gcd lost"};
  OperatorMatrix acc = ib.ops[0] * cd(2.0 * unit_interval(c.rng) - 1.0, 2.0 * unit_interval(c.rng) - 1.0);
  for (int k = 1; k < ib.dim(); ++k)
    acc = acc + ib.ops[k] * cd(2.0 * unit_interval(c.rng) - 1.0, 2.0 * unit_interval(c.rng) - 1.0);
  double an = acc.frobenius_norm();
  if (an < 1e-9) acc = ib.ops[0];
  else acc = acc * cd(1.0 / an);
  CircleFunction phi = symbol_of_intertwiner(acc, mt, ma, c.positive);
  double lhs = operator_norm(acc);
  double rhs = 0.0;
  try {
    rhs = dist_to_alpha_hinf(phi, p.alpha);
  } catch (const NoConvergence& e) {
    return {TrialStatus::indeterminate, 1.0, c.norm_tol, d + std::string(" | ") + e.what()};
  }
  std::ostringstream os;
  os << d << " | norm=" << lhs << " dist=" << rhs;
  return judge_small(std::abs(lhs - rhs), c.norm_tol, c, os.str());
}

TrialOutcome check_lemma51(Ctx& c) {
  PlantedPair p = planted_pair(c.rng, c.deg_lo, c.deg_hi, kModelRadius);
  int n = grid_for(p.theta, p.alpha, c.escalated);
  ModelBasis mt(p.theta, n), ma(p.alpha, n);
  CircleFunction phi = random_laurent(c.rng, 6, 6, n);
  Eigen::MatrixXcd lhs = ma.conjugation_matrix() * atto_matrix(phi, mt, ma).matrix().conjugate();
  CircleFunction sym = ma.theta_circle() * phi.conj() * mt.theta_circle().conj();
  Eigen::MatrixXcd rhs = atto_matrix(sym, mt, ma).matrix() * mt.conjugation_matrix();
  double r1 = (lhs - rhs).norm();

  BlaschkeProduct small = random_inner(c.rng, uniform_int(c.rng, 1, 4), kDualRadius);
  LaurentWindow w = fitted_window(small, small, 2, dual_base(c));
  DualBlockOperator dz = dz_block(small, w);
  double r2 = dz.gamma_hat().norm();
  Eigen::MatrixXcd corner = Eigen::MatrixXcd::Zero(dz.gamma_check().rows(), dz.gamma_check().cols());
  corner(0, 0) = dz.gamma_check()(0, 0);
  double r3 = (dz.gamma_check() - corner).norm();
  return judge_small(std::max({r1, r2, r3}), c.identity, c, pair_detail(p));
}

struct DualInstance {
  BlaschkeProduct theta = BlaschkeProduct::unit();
  BlaschkeProduct alpha = BlaschkeProduct::unit();
  CircleFunction phi;
  LaurentWindow window;
  IdattoCase expected = IdattoCase::none;
  std::string detail;
};

DualInstance dual_case1_instance(Ctx& c) {
  DualInstance inst;
  std::vector<cd> used;
  BlaschkeProduct g0 = random_inner(c.rng, uniform_int(c.rng, 0, 2), kDualRadius, &used);
  BlaschkeProduct tail_t = random_inner(c.rng, uniform_int(c.rng, 0, 2), kDualRadius, &used);
  BlaschkeProduct tail_a = random_inner(c.rng, uniform_int(c.rng, 0, 2), kDualRadius, &used);
  BlaschkeProduct z1 = BlaschkeProduct::monomial(1);
  inst.theta = z1 * g0 * tail_t;
  inst.alpha = z1 * g0 * tail_a;
  BlaschkeProduct gamma = z1 * g0;
  LaurentWindow base = dual_base(c);
  ModelBasis mzg(z1 * gamma, base.grid);
  inst.phi = tail_a.to_circle(base.grid) * random_model_element(c.rng, mzg);
  inst.window = fitted_window(inst.theta, inst.alpha, inst.phi.effective_band(1e-12), base);
  inst.expected = IdattoCase::case1;
  inst.detail = "case1 " + pair_detail({inst.theta, inst.alpha, gamma});
  return inst;
}

DualInstance dual_case2_instance(Ctx& c) {
  DualInstance inst;
  inst.theta = random_inner(c.rng, uniform_int(c.rng, 1, 4), kDualRadius);
  inst.alpha = inst.theta.with_constant(unimodular(c.rng) * inst.theta.constant());
  LaurentWindow base = dual_base(c);
  ModelBasis mzt(BlaschkeProduct::monomial(1) * inst.theta, base.grid);
  CircleFunction g = random_model_element(c.rng, mzt);
  auto phi_at = [&](int n) {
    CircleFunction k0 = kernel_at_zero_fn(inst.theta, n);
    return g.resampled(n) * CircleFunction::from_samples(k0.samples().cwiseInverse());
  };
  CircleFunction probe = phi_at(base.grid);
  inst.window = fitted_window(inst.theta, inst.alpha, probe.effective_band(1e-12), base);
  inst.phi = inst.window.grid == base.grid ? probe : phi_at(inst.window.grid);
  inst.expected = IdattoCase::case2;
  inst.detail = "case2 deg(theta)=" + std::to_string(inst.theta.degree());
  return inst;
}

DualInstance dual_negative_instance(Ctx& c) {
  DualInstance inst;
  std::vector<cd> used;
  inst.theta = random_inner(c.rng, uniform_int(c.rng, 1, 4), kDualRadius, &used);
  inst.alpha = random_inner(c.rng, uniform_int(c.rng, 1, 4), kDualRadius, &used);
  LaurentWindow base = dual_base(c);
  inst.phi = random_laurent(c.rng, 6, 6, base.grid);
  inst.window = fitted_window(inst.theta, inst.alpha, 6, base);
  inst.expected = IdattoCase::none;
  inst.detail = "negative deg(theta)=" + std::to_string(inst.theta.degree()) +
                " deg(alpha)=" + std::to_string(inst.alpha.degree());
  return inst;
}

const char* case_name(IdattoCase k) {
  switch (k) {
    case IdattoCase::case1: return "case1";
    case IdattoCase::case2: return "case2";
    default: return "none";
  }
}

TrialOutcome judge_dual_instance(Ctx& c, const DualInstance& inst) {
  IdattoCase cls = idatto_classify(inst.phi, inst.theta, inst.alpha, c.positive);
  std::string d = inst.detail;
  if (cls != inst.expected)
    return {TrialStatus::fail, 1.0, c.positive,
            d + " | classified " + case_name(cls) + " expected " + case_name(inst.expected)};
  double rank2 = rank2_identity_residual(inst.phi, inst.theta, inst.alpha, inst.window);
  if (rank2 >= c.positive) {
    TrialOutcome o = judge_small(rank2, c.positive, c, d + " | rank-two identity");
    if (o.status != TrialStatus::pass) return o;
  }
  if (inst.expected != IdattoCase::none) {
    double r = interior_commutator_residual(inst.phi, inst.theta, inst.alpha, inst.window);
    return judge_positive(r, c, std::move(d));
  }
  double r0 = interior_commutator_residual(inst.phi, inst.theta, inst.alpha, inst.window);
  double r1 = interior_commutator_residual(inst.phi, inst.theta, inst.alpha, inst.window.doubled());
  return judge_negative(r0, r1, c, std::move(d));
}

TrialOutcome check_idatto(Ctx& c) {
  int kind = uniform_int(c.rng, 0, 2);
  DualInstance inst = kind == 0   ? dual_case1_instance(c)
                      : kind == 1 ? dual_case2_instance(c)
                                  : dual_negative_instance(c);
  return judge_dual_instance(c, inst);
}

TrialOutcome check_wnios(Ctx& c) {
  if (coin(c.rng)) return judge_dual_instance(c, dual_case2_instance(c));
  DualInstance inst;
  inst.theta = random_inner(c.rng, uniform_int(c.rng, 1, 4), kDualRadius);
  inst.alpha = inst.theta.with_constant(unimodular(c.rng) * inst.theta.constant());
  LaurentWindow base = dual_base(c);
  inst.phi = random_laurent(c.rng, 6, 6, base.grid);
  inst.window = fitted_window(inst.theta, inst.alpha, 6, base);
  inst.expected = IdattoCase::none;
  inst.detail = "negative same-theta deg=" + std::to_string(inst.theta.degree());
  return judge_dual_instance(c, inst);
}

TrialOutcome check_lemma61(Ctx& c) {
  std::vector<cd> used;
  BlaschkeProduct theta = random_inner(c.rng, uniform_int(c.rng, 1, 4), kDualRadius, &used);
  BlaschkeProduct alpha = random_inner(c.rng, uniform_int(c.rng, 1, 4), kDualRadius, &used);
  LaurentWindow w = fitted_window(theta, alpha, 8, dual_base(c));
  int n = w.grid;
  int sub = uniform_int(c.rng, 0, 5);
  CircleFunction phi = CircleFunction::constant(0.0, n);
  if (sub == 1)
    phi = alpha.to_circle(n) * random_coanalytic(c.rng, 5, n);
  else if (sub == 2)
    phi = theta.to_circle(n).conj() * random_analytic(c.rng, 5, n);
  else
    phi = random_laurent(c.rng, 5, 5, n);
  DualBlockOperator d = dtto_blocks(phi, theta, alpha, w);
  std::string detail = "sub=" + std::to_string(sub);
  switch (sub) {
    case 0: {
      double r = d.t_hat().norm();
      if (r > c.negative) return {TrialStatus::pass, r, c.negative, detail + " | t_hat nonzero"};
      return {TrialStatus::fail, r, c.negative, detail + " | t_hat vanished for phi != 0"};
    }
    case 1:
      return judge_small(d.gamma_check().norm(), c.quadrature, c, detail + " | gamma_check kernel");
    case 2:
      return judge_small(d.gamma_hat().norm(), c.quadrature, c, detail + " | gamma_hat kernel");
    case 3: {
      double r = d.t_check().norm();
      if (r > c.negative) return {TrialStatus::pass, r, c.negative, detail + " | t_check nonzero"};
      return {TrialStatus::fail, r, c.negative, detail + " | t_check vanished for phi != 0"};
    }
    case 4: {
      double r = d.gamma_check().norm();
      if (r > c.negative) return {TrialStatus::pass, r, c.negative, detail + " | gamma_check generic"};
      return {TrialStatus::fail, r, c.negative, detail + " | gamma_check vanished off-kernel"};
    }
    default: {
      double r = d.gamma_hat().norm();
      if (r > c.negative) return {TrialStatus::pass, r, c.negative, detail + " | gamma_hat generic"};
      return {TrialStatus::fail, r, c.negative, detail + " | gamma_hat vanished off-kernel"};
    }
  }
}

TrialOutcome check_kmutant(Ctx& c) {
  int case_id = uniform_int(c.rng, 1, 3);
  bool positive = coin(c.rng);
  LaurentWindow base = dual_base(c);
  BlaschkeProduct theta = BlaschkeProduct::unit(), alpha = BlaschkeProduct::unit();
  if (case_id == 1) {
    theta = random_nonvanishing_at_zero(c.rng, uniform_int(c.rng, 1, 3), kDualRadius);
    alpha = random_inner(c.rng, uniform_int(c.rng, 1, 3), kDualRadius);
  } else if (case_id == 2) {
    theta = BlaschkeProduct::monomial(1) * random_inner(c.rng, uniform_int(c.rng, 0, 2), kDualRadius);
    alpha = random_nonvanishing_at_zero(c.rng, uniform_int(c.rng, 1, 3), kDualRadius);
  } else {
    theta = BlaschkeProduct::monomial(1) * random_inner(c.rng, uniform_int(c.rng, 0, 2), kDualRadius);
    alpha = BlaschkeProduct::monomial(1) * random_inner(c.rng, uniform_int(c.rng, 0, 2), kDualRadius);
  }
  int n0 = base.grid;
  KmutantInput in;
  in.case_id = case_id;
  if (case_id == 1) {
    in.psi4 = random_laurent(c.rng, 5, 5, n0);
  } else if (case_id == 2) {
    in.psi1 = random_laurent(c.rng, 5, 5, n0);
  } else {
    in.psi1 = alpha.to_circle(n0) * theta.to_circle(n0).conj() * random_analytic(c.rng, 5, n0);
    in.psi3 = random_laurent(c.rng, 5, 5, n0);
    in.psi4 = random_analytic(c.rng, 5, n0);
  }
  KmutantSymbols probe = kmutant_symbols(in, theta, alpha, n0);
  int band = std::max({probe.psi1.effective_band(1e-12), probe.psi2.effective_band(1e-12),
                       probe.psi3.effective_band(1e-12), probe.psi4.effective_band(1e-12)});
  LaurentWindow w = fitted_window(theta, alpha, band, base);
  std::string d = "case" + std::to_string(case_id) + (positive ? " constructed" : " perturbed");

  if (positive) {
    KmutantSymbols syms;
    DualBlockOperator op = kmutant_build(in, theta, alpha, w, &syms);
    double r = dual_intertwine_residual(op);
    double c18 = c18_conditions(syms.psi1, syms.psi2, syms.psi3, syms.psi4, theta, alpha)
                     .max_residual();
    std::ostringstream os;
    os << d << " | intertwine=" << r << " c18=" << c18;
    if (r < c.positive && c18 < c.identity)
      return {TrialStatus::pass, std::max(r, c18), c.positive, os.str()};
    if (r > c.negative || c18 > c.negative)
      return {TrialStatus::fail, std::max(r, c18), c.positive, os.str()};
    return {TrialStatus::indeterminate, std::max(r, c18), c.positive, os.str()};
  }

  KmutantSymbols syms = kmutant_symbols(in, theta, alpha, w.grid);
  CircleFunction bump = random_laurent(c.rng, 4, 4, w.grid) * cd(0.3);
  int which;
  if (case_id == 1)
    which = uniform_int(c.rng, 1, 3);
  else if (case_id == 2)
    which = uniform_int(c.rng, 2, 4);
  else
    which = std::array<int, 3>{1, 2, 4}[uniform_int(c.rng, 0, 2)];
  if (which == 1) syms.psi1 = syms.psi1 + bump;
  if (which == 2) syms.psi2 = syms.psi2 + bump;
  if (which == 3) syms.psi3 = syms.psi3 + bump;
  if (which == 4) syms.psi4 = syms.psi4 + bump;
  double c18 =
      c18_conditions(syms.psi1, syms.psi2, syms.psi3, syms.psi4, theta, alpha).max_residual();
  DualBlockOperator op0 = blocks_from_symbols(syms.psi1, syms.psi2, syms.psi3, syms.psi4, theta,
                                              alpha, w);
  double r0 = dual_intertwine_residual(op0);
  DualBlockOperator op1 = blocks_from_symbols(syms.psi1, syms.psi2, syms.psi3, syms.psi4, theta,
                                              alpha, w.doubled());
  double r1 = dual_intertwine_residual(op1);
  std::ostringstream os;
  os << d << " | psi" << which << " bumped, c18=" << c18;
  if (c18 < c.identity)
    return {TrialStatus::fail, c18, c.negative, os.str() + " | perturbation kept c18"};
  return judge_negative(r0, r1, c, os.str());
}

TrialOutcome check_remark65(Ctx& c) {
  BlaschkeProduct theta = random_nonvanishing_at_zero(c.rng, uniform_int(c.rng, 1, 3), kDualRadius);
  BlaschkeProduct alpha = theta.with_constant(unimodular(c.rng) * theta.constant());
  LaurentWindow base = dual_base(c);
  CircleFunction probe = theta.to_circle(base.grid);
  LaurentWindow w = fitted_window(theta, alpha, 2 * probe.effective_band(1e-12) + 2, base);
  int n = w.grid;
  CircleFunction tc = theta.to_circle(n);
  CircleFunction psi2 = std::conj(theta.at_zero()) * (tc * tc);
  CircleFunction zero = CircleFunction::constant(0.0, n);
  DualBlockOperator d = blocks_from_symbols(tc, psi2, zero, tc, theta, alpha, w);
  double r = dual_intertwine_residual(d);
  DualBlockOperator dphi = dtto_blocks(tc, theta, alpha, w);
  double mismatch = std::max({(d.t_hat() - dphi.t_hat()).norm(),
                              (d.gamma_check() - dphi.gamma_check()).norm(),
                              (d.gamma_hat() - dphi.gamma_hat()).norm(),
                              (d.t_check() - dphi.t_check()).norm()});
  std::ostringstream os;
  os << "deg(theta)=" << theta.degree() << " | intertwine=" << r << " mismatch=" << mismatch;
  if (mismatch <= c.negative)
    return {TrialStatus::fail, mismatch, c.negative, os.str() + " | symbol form matched"};
  return judge_positive(r, c, os.str());
}

// ------------------------------------------------------------- registry --

struct CheckDef {
  int default_trials;
  TrialOutcome (*fn)(Ctx&);
};

const std::vector<std::pair<std::string, CheckDef>>& registry() {
  static const std::vector<std::pair<std::string, CheckDef>> reg = {
      {"lemma-3.1", {30, check_lemma31}},
      {"eq-3.2", {40, check_eq32}},
      {"lemma-3.3", {40, check_lemma33}},
      {"thm-inter", {30, check_thm_inter}},
      {"cor-inter2", {30, check_cor_inter2}},
      {"cor-coprime-zero", {20, check_cor_coprime}},
      {"cor-star", {20, check_cor_star}},
      {"cor-hankel-sts", {16, check_hankel_sts}},
      {"cor-hankel-sst", {16, check_hankel_sst}},
      {"prop-2.1", {40, check_prop21}},
      {"lemma-2.4", {30, check_lemma24}},
      {"prop-4.1-contractive", {60, check_prop41}},
      {"thm-4.2-norm", {10, check_thm42}},
      {"lemma-5.1", {30, check_lemma51}},
      {"thm-5.2-idatto", {24, check_idatto}},
      {"cor-5.3-wnios", {16, check_wnios}},
      {"lemma-6.1", {36, check_lemma61}},
      {"thm-6.3-kmutant", {18, check_kmutant}},
      {"remark-6.5-nonsymbol", {10, check_remark65}},
  };
  return reg;
}

struct Resolved {
  std::string id;
  std::uint64_t seed;
  int deg_lo, deg_hi;
  double quadrature, identity, positive, negative, rank, norm_tol;
  std::optional<LaurentWindow> window;
};

double tol_or(const std::map<std::string, double>& m, const char* key, double fallback) {
  auto it = m.find(key);
  return it == m.end() ? fallback : it->second;
}

TrialRecord run_one(const CheckDef& def, const Resolved& rc, int index) {
  auto attempt = [&](bool escalated) -> TrialOutcome {
    Ctx ctx;
    ctx.rng.seed(trial_seed(rc.seed, rc.id, index));
    ctx.deg_lo = rc.deg_lo;
    ctx.deg_hi = rc.deg_hi;
    ctx.quadrature = rc.quadrature;
    ctx.identity = rc.identity;
    ctx.positive = rc.positive;
    ctx.negative = rc.negative;
    ctx.rank = rc.rank;
    ctx.norm_tol = rc.norm_tol;
    ctx.window = rc.window;
    ctx.escalated = escalated;
    try {
      return def.fn(ctx);
    } catch (const WindowTooSmall& e) {
      return {TrialStatus::indeterminate, 0.0, 0.0, std::string("window: ") + e.what()};
    } catch (const NoConvergence& e) {
      return {TrialStatus::indeterminate, 0.0, 0.0, std::string("convergence: ") + e.what()};
    } catch (const Error& e) {
      return {TrialStatus::fail, 0.0, 0.0, std::string("error: ") + e.what()};
    }
  };
  TrialRecord rec;
  rec.index = index;
  TrialOutcome out = attempt(false);
  if (out.status == TrialStatus::indeterminate) {
    out = attempt(true);
    rec.retried = true;
  }
  rec.status = out.status;
  rec.residual = out.residual;
  rec.tolerance = out.tolerance;
  rec.detail = std::move(out.detail);
  return rec;
}

std::vector<TrialRecord> run_trials(const CheckDef& def, const Resolved& rc, int trials) {
  std::vector<TrialRecord> recs(trials);
  std::atomic<int> next{0};
  unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                     static_cast<unsigned>(trials)));
  auto work = [&] {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= trials) break;
      recs[i] = run_one(def, rc, i);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < workers; ++k) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return recs;
}

}  // namespace

const std::vector<std::string>& check_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& [id, def] : registry()) v.push_back(id);
    return v;
  }();
  return ids;
}

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> tols = {
      {"quadrature", 1e-10}, {"identity", 1e-9}, {"positive", 1e-8},
      {"negative", 1e-3},    {"rank", 1e-10},    {"norm", 1e-6},
  };
  return tols;
}

VerificationReport run_check(const CheckConfig& config) {
  const CheckDef* def = nullptr;
  for (const auto& [id, d] : registry())
    if (id == config.theorem_id) def = &d;
  if (!def) throw UnknownTheorem("no check registered for '" + config.theorem_id + "'");
  if (config.trials < 0) throw Error("trials must be at least 1");
  if (config.degree_lo < 1 || config.degree_hi > 12 || config.degree_lo > config.degree_hi)
    throw Error("degree range must sit inside [1, 12]");

  const auto& dt = default_tolerances();
  Resolved rc;
  rc.id = config.theorem_id;
  rc.seed = config.seed;
  rc.deg_lo = config.degree_lo;
  rc.deg_hi = config.degree_hi;
  rc.quadrature = tol_or(config.tolerances, "quadrature", dt.at("quadrature"));
  rc.identity = tol_or(config.tolerances, "identity", dt.at("identity"));
  rc.positive = tol_or(config.tolerances, "positive", dt.at("positive"));
  rc.negative = tol_or(config.tolerances, "negative", dt.at("negative"));
  rc.rank = tol_or(config.tolerances, "rank", dt.at("rank"));
  rc.norm_tol = tol_or(config.tolerances, "norm", dt.at("norm"));
  rc.window = config.window;

  int trials = config.trials > 0 ? config.trials : def->default_trials;
  auto t0 = std::chrono::steady_clock::now();
  std::vector<TrialRecord> recs = run_trials(*def, rc, trials);
  auto t1 = std::chrono::steady_clock::now();

  VerificationReport rep;
  rep.theorem_id = config.theorem_id;
  rep.seed = config.seed;
  rep.trials = trials;
  rep.degree_lo = config.degree_lo;
  rep.degree_hi = config.degree_hi;
  for (const auto& r : recs) {
    if (r.status == TrialStatus::pass) ++rep.passed;
    else if (r.status == TrialStatus::fail) ++rep.failed;
    else ++rep.indeterminate;
    rep.max_residual = std::max(rep.max_residual, r.residual);
  }
  rep.pass = rep.failed == 0 && rep.indeterminate == 0;
  rep.elapsed_seconds = std::chrono::duration<double>(t1 - t0).count();
  rep.records = std::move(recs);
  return rep;
}

std::vector<VerificationReport> run_all(std::uint64_t seed) {
  std::vector<VerificationReport> out;
  for (const auto& id : check_ids()) {
    CheckConfig cfg;
    cfg.theorem_id = id;
    cfg.seed = seed;
    out.push_back(run_check(cfg));
  }
  return out;
}

const char* status_name(TrialStatus s) {
  switch (s) {
    case TrialStatus::pass: return "pass";
    case TrialStatus::fail: return "fail";
    default: return "indeterminate";
  }
}

namespace {
nlohmann::json report_json(const VerificationReport& r) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& t : r.records)
    records.push_back({{"index", t.index},
                       {"status", status_name(t.status)},
                       {"residual", t.residual},
                       {"tolerance", t.tolerance},
                       {"retried", t.retried},
                       {"detail", t.detail}});
  return nlohmann::json{{"schema", "mskit-report/1"},
                        {"theorem_id", r.theorem_id},
                        {"seed", r.seed},
                        {"trials", r.trials},
                        {"degree_lo", r.degree_lo},
                        {"degree_hi", r.degree_hi},
                        {"passed", r.passed},
                        {"failed", r.failed},
                        {"indeterminate", r.indeterminate},
                        {"pass", r.pass},
                        {"max_residual", r.max_residual},
                        {"elapsed_seconds", r.elapsed_seconds},
                        {"records", records}};
}
}  // namespace

std::string report_to_json(const VerificationReport& report, int indent) {
  return report_json(report).dump(indent);
}

std::string reports_to_json(const std::vector<VerificationReport>& reports, int indent) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) arr.push_back(report_json(r));
  return nlohmann::json{{"schema", "mskit-report/1"}, {"reports", arr}}.dump(indent);
}

}  // namespace mskit
