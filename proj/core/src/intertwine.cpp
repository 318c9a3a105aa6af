#include "mskit/intertwine.hpp"

#include <cmath>

namespace mskit {
namespace {

double intertwining_residual(const OperatorMatrix& a, const ModelBasis& domain,
                             const ModelBasis& codomain) {
  const Eigen::MatrixXcd s_dom = compressed_shift(domain).matrix();
  const Eigen::MatrixXcd s_cod = compressed_shift(codomain).matrix();
  return (s_cod * a.matrix() - a.matrix() * s_dom).norm();
}

}  // namespace

std::vector<Eigen::MatrixXcd> sylvester_nullspace(const Eigen::MatrixXcd& p,
                                                  const Eigen::MatrixXcd& q,
                                                  Eigen::VectorXd* singular_values,
                                                  double rank_tol) {
  const int r = static_cast<int>(p.rows());
  const int c = static_cast<int>(q.rows());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(r * c, r * c);
  for (int j = 0; j < c; ++j) {
    m.block(j * r, j * r, r, r) = p;
    for (int l = 0; l < c; ++l) {
      m.block(j * r, l * r, r, r).diagonal().array() -= q(l, j);
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
  const Eigen::VectorXd sv = svd.singularValues();
  if (singular_values) *singular_values = sv;
  const double cutoff = rank_tol * std::max(sv.size() > 0 ? sv(0) : 0.0, 1.0);
  std::vector<Eigen::MatrixXcd> out;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) <= cutoff) {
      const Eigen::VectorXcd v = svd.matrixV().col(i);
      out.push_back(Eigen::Map<const Eigen::MatrixXcd>(v.data(), r, c));
    }
  }
  return out;
}

IntertwinerBasis solve_intertwiners(const ModelBasis& domain, const ModelBasis& codomain) {
  IntertwinerBasis result;
  const auto flats = sylvester_nullspace(compressed_shift(codomain).matrix(),
                                         compressed_shift(domain).matrix(),
                                         &result.singular_values);
  const SpaceTag dom = space_tag(domain);
  const SpaceTag cod = space_tag(codomain);
  result.ops.reserve(flats.size());
  for (const auto& x : flats) result.ops.emplace_back(x, dom, cod);
  return result;
}

CircleFunction symbol_of_intertwiner(const OperatorMatrix& a, const ModelBasis& domain,
                                     const ModelBasis& codomain, double residual_tol) {
  const double res = intertwining_residual(a, domain, codomain);
  if (res > residual_tol) {
    throw NotAnIntertwiner("intertwining residual " + std::to_string(res));
  }
  const Eigen::VectorXcd k0 = domain.project(domain.kernel_at_zero());
  return codomain.synthesize(a.matrix() * k0);
}

double membership_residual(const CircleFunction& phi, const BlaschkeProduct& theta,
                           const BlaschkeProduct& alpha) {
  const double phi_norm = phi.norm();
  if (phi_norm < 1e-14) return 0.0;
  const BlaschkeProduct gamma = BlaschkeProduct::gcd(alpha, theta);
  if (gamma.is_unit()) return 1.0;
  const int n = phi.grid_size();
  const ModelBasis bg(gamma, n);
  const Eigen::VectorXcd u = (alpha / gamma).to_circle(n).samples();
  const Eigen::MatrixXcd span = u.asDiagonal() * bg.sample_matrix();
  const Eigen::VectorXcd coeffs = span.adjoint() * phi.samples() / static_cast<double>(n);
  const double err =
      (phi.samples() - span * coeffs).norm() / std::sqrt(static_cast<double>(n));
  return err / phi_norm;
}

CommutatorDefect commutator_defect(const CircleFunction& phi, const ModelBasis& domain,
                                   const ModelBasis& codomain) {
  const OperatorMatrix a = atto_matrix(phi, domain, codomain);
  const Eigen::MatrixXcd lhs = compressed_shift(codomain).matrix() * a.matrix() -
                               a.matrix() * compressed_shift(domain).matrix();
  const Eigen::VectorXcd u1 = codomain.project(phi * domain.theta_circle());
  const Eigen::VectorXcd v1 = domain.project(domain.conjugate_kernel_at_zero());
  const Eigen::VectorXcd u2 = codomain.project(codomain.kernel_at_zero());
  const Eigen::VectorXcd v2 =
      domain.project(CircleFunction::monomial(-1, phi.grid_size()) * phi.conj());
  const Eigen::MatrixXcd rhs = u1 * v1.adjoint() - u2 * v2.adjoint();
  return {lhs, (lhs - rhs).norm()};
}

CancellationResult cancellation_test(const CircleFunction& phi, const BlaschkeProduct& theta,
                                     const BlaschkeProduct& alpha, double tol) {
  const BlaschkeProduct eta = BlaschkeProduct::lcm(alpha, theta);
  const ModelBasis be(eta, phi.grid_size());
  const Eigen::VectorXcd p = be.project(phi * theta.to_circle(phi.grid_size()));
  const Eigen::VectorXcd k = be.project(be.kernel_at_zero());
  const cd c = k.dot(p) / k.squaredNorm();
  const double residual = (p - c * k).norm();
  return {residual < tol, c, residual};
}

IntersectionResult intersection_subspace(const BlaschkeProduct& theta,
                                         const BlaschkeProduct& alpha, int grid) {
  const BlaschkeProduct product = alpha * theta;
  const int n = grid > 0 ? grid : default_grid(product.spectral_radius());
  const ModelBasis bp(product, n);
  const ModelBasis bt(theta, n);
  const ModelBasis ba(alpha, n);
  const Eigen::VectorXcd alpha_samples = alpha.to_circle(n).samples();
  const Eigen::VectorXcd theta_samples = bt.theta_circle().samples();

  const auto embed = [&](const Eigen::VectorXcd& inner_samples, const ModelBasis& basis) {
    Eigen::MatrixXcd coords(bp.dim(), basis.dim());
    for (int j = 0; j < basis.dim(); ++j) {
      coords.col(j) = bp.project(CircleFunction::from_samples(
          inner_samples.cwiseProduct(basis.sample_matrix().col(j))));
    }
    return coords;
  };
  const Eigen::MatrixXcd u = embed(alpha_samples, bt);
  const Eigen::MatrixXcd v = embed(theta_samples, ba);

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(u.adjoint() * v,
                                         Eigen::ComputeFullU | Eigen::ComputeFullV);
  IntersectionResult out;
  out.principal_cosines = svd.singularValues();
  int d = 0;
  while (d < out.principal_cosines.size() && out.principal_cosines(d) > 1.0 - 1e-9) ++d;
  out.dim = d;
  out.basis_coords = u * svd.matrixU().leftCols(d);

  const BlaschkeProduct gamma = BlaschkeProduct::gcd(alpha, theta);
  if (gamma.is_unit()) {
    out.distance_to_lcm_gcd = d == 0 ? 0.0 : 1.0;
    return out;
  }
  if (d != gamma.degree()) {
    out.distance_to_lcm_gcd = 1.0;
    return out;
  }
  const ModelBasis bg(gamma, n);
  const Eigen::VectorXcd lcm_samples = BlaschkeProduct::lcm(alpha, theta).to_circle(n).samples();
  const Eigen::MatrixXcd w = embed(lcm_samples, bg);
  // Largest principal sine, computed from the complement residual directly;
  // sqrt(1 - cos^2) loses half the digits once the angle is near zero.
  const Eigen::MatrixXcd resid = out.basis_coords - w * (w.adjoint() * out.basis_coords);
  Eigen::JacobiSVD<Eigen::MatrixXcd> angles(resid);
  out.distance_to_lcm_gcd =
      angles.singularValues().size() > 0 ? angles.singularValues()(0) : 0.0;
  return out;
}

OperatorMatrix star_transform(const OperatorMatrix& a, const ModelBasis& domain,
                              const ModelBasis& codomain, double residual_tol) {
  const double res = intertwining_residual(a, domain, codomain);
  if (res > residual_tol) {
    throw NotAnIntertwiner("input residual " + std::to_string(res));
  }
  const Eigen::MatrixXcd primed = codomain.conjugation_matrix() * a.matrix().conjugate() *
                                  domain.conjugation_matrix().conjugate();
  const Eigen::MatrixXcd s_dom = compressed_shift(domain).matrix();
  const Eigen::MatrixXcd s_cod = compressed_shift(codomain).matrix();
  const double starred = (s_cod.adjoint() * primed - primed * s_dom.adjoint()).norm();
  if (starred > residual_tol) {
    throw NotAnIntertwiner("transformed residual " + std::to_string(starred));
  }
  return OperatorMatrix(primed, a.domain(), a.codomain());
}

Eigen::MatrixXcd jsharp_matrix(const ModelBasis& from_sharp, const ModelBasis& to) {
  if (from_sharp.grid_size() != to.grid_size()) {
    throw GridMismatch("flip bases on different grids");
  }
  Eigen::MatrixXcd m(to.dim(), from_sharp.dim());
  for (int j = 0; j < from_sharp.dim(); ++j) {
    m.col(j) = to.project(from_sharp.basis_function(j).jsharp());
  }
  return m;
}

OperatorMatrix hankel_transform(const OperatorMatrix& a, const ModelBasis& domain,
                                const ModelBasis& codomain_sharp, const ModelBasis& codomain,
                                double residual_tol) {
  const double res = intertwining_residual(a, domain, codomain_sharp);
  if (res > residual_tol) {
    throw NotAnIntertwiner("input residual " + std::to_string(res));
  }
  const Eigen::MatrixXcd b = jsharp_matrix(codomain_sharp, codomain) * a.matrix().conjugate() *
                             domain.conjugation_matrix().conjugate();
  const Eigen::MatrixXcd s_dom = compressed_shift(domain).matrix();
  const Eigen::MatrixXcd s_cod = compressed_shift(codomain).matrix();
  const double hankel_res = (s_cod * b - b * s_dom.adjoint()).norm();
  if (hankel_res > residual_tol) {
    throw NotAnIntertwiner("transformed residual " + std::to_string(hankel_res));
  }
  return OperatorMatrix(b, space_tag(domain), space_tag(codomain));
}

}  // namespace mskit
