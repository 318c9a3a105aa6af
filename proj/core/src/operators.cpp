#include "mskit/operators.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace mskit {

SpaceTag space_tag(const ModelBasis& basis) {
  std::ostringstream os;
  os << "K[";
  os << std::scientific << std::setprecision(12);
  for (const auto& z : basis.inner_function().zeros()) {
    os << z.point.real() << "," << z.point.imag() << "x" << z.multiplicity << ";";
  }
  os << "]@" << basis.grid_size();
  return {os.str(), basis.dim()};
}

OperatorMatrix::OperatorMatrix(Eigen::MatrixXcd m, SpaceTag domain, SpaceTag codomain)
    : mat_(std::move(m)), domain_(std::move(domain)), codomain_(std::move(codomain)) {
  if (mat_.cols() != domain_.dim || mat_.rows() != codomain_.dim) {
    throw GridMismatch("matrix dimensions do not match the space tags");
  }
}

OperatorMatrix OperatorMatrix::adjoint() const {
  return OperatorMatrix(mat_.adjoint(), codomain_, domain_);
}

OperatorMatrix OperatorMatrix::operator*(const OperatorMatrix& rhs) const {
  if (!(domain_ == rhs.codomain_)) {
    throw GridMismatch("composition tags disagree: " + domain_.key + " vs " + rhs.codomain_.key);
  }
  return OperatorMatrix(mat_ * rhs.mat_, rhs.domain_, codomain_);
}

OperatorMatrix OperatorMatrix::operator+(const OperatorMatrix& rhs) const {
  if (!(domain_ == rhs.domain_ && codomain_ == rhs.codomain_)) {
    throw GridMismatch("sum tags disagree");
  }
  return OperatorMatrix(mat_ + rhs.mat_, domain_, codomain_);
}

OperatorMatrix OperatorMatrix::operator-(const OperatorMatrix& rhs) const {
  if (!(domain_ == rhs.domain_ && codomain_ == rhs.codomain_)) {
    throw GridMismatch("difference tags disagree");
  }
  return OperatorMatrix(mat_ - rhs.mat_, domain_, codomain_);
}

OperatorMatrix OperatorMatrix::operator*(cd scalar) const {
  return OperatorMatrix(mat_ * scalar, domain_, codomain_);
}

OperatorMatrix OperatorMatrix::identity(const SpaceTag& tag) {
  return OperatorMatrix(Eigen::MatrixXcd::Identity(tag.dim, tag.dim), tag, tag);
}

OperatorMatrix OperatorMatrix::rank_one(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v,
                                        const SpaceTag& domain, const SpaceTag& codomain) {
  return OperatorMatrix(u * v.adjoint(), domain, codomain);
}

OperatorMatrix atto_matrix(const CircleFunction& phi, const ModelBasis& domain,
                           const ModelBasis& codomain) {
  if (phi.grid_size() != domain.grid_size() || domain.grid_size() != codomain.grid_size()) {
    throw GridMismatch("symbol and bases must share one grid");
  }
  const int n = phi.grid_size();
  const Eigen::MatrixXcd weighted = phi.samples().asDiagonal() * domain.sample_matrix();
  Eigen::MatrixXcd m = codomain.sample_matrix().adjoint() * weighted / static_cast<double>(n);
  return OperatorMatrix(std::move(m), space_tag(domain), space_tag(codomain));
}

OperatorMatrix compressed_shift(const ModelBasis& basis) {
  return atto_matrix(CircleFunction::monomial(1, basis.grid_size()), basis, basis);
}

double operator_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  if (std::max(m.rows(), m.cols()) <= 256) {
    return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()(0);
  }
  return Eigen::BDCSVD<Eigen::MatrixXcd>(m).singularValues()(0);
}

AnalyticDefect analytic_defect(const OperatorMatrix& a, const ModelBasis& domain,
                               const ModelBasis& codomain) {
  const OperatorMatrix s_dom = compressed_shift(domain);
  const OperatorMatrix s_cod = compressed_shift(codomain);
  AnalyticDefect out;
  out.defect = a.matrix() - s_cod.matrix() * a.matrix() * s_dom.matrix().adjoint();
  out.psi = Eigen::VectorXcd::Zero(codomain.dim());

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(out.defect, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  out.sigma1 = sv.size() > 0 ? sv(0) : 0.0;
  out.sigma2 = sv.size() > 1 ? sv(1) : 0.0;
  if (out.sigma1 < 1e-12) {
    out.factorizable = true;
    return out;
  }
  const Eigen::VectorXcd k0 = domain.project(domain.kernel_at_zero());
  const double k0n = k0.norm();
  const Eigen::VectorXcd v1 = svd.matrixV().col(0);
  out.kernel_alignment = k0n > 0 ? std::abs(v1.dot(k0)) / k0n : 0.0;
  out.factorizable = (out.sigma2 / out.sigma1 < 1e-9) && (out.kernel_alignment > 1.0 - 1e-8);
  if (out.factorizable) {
    out.psi = out.defect * k0 / (k0n * k0n);
  }
  return out;
}

std::vector<int> default_hankel_schedule() { return {64, 128, 256, 512, 1024}; }

double dist_to_alpha_hinf(const CircleFunction& phi, const BlaschkeProduct& alpha,
                          const std::vector<int>& schedule, double tol) {
  if (schedule.empty()) throw NoConvergence("empty Hankel schedule");
  const int max_size = *std::max_element(schedule.begin(), schedule.end());
  int n = phi.grid_size();
  // Hankel entries reach coefficient index -(2*max_size - 1); keep it well
  // inside the representable band [-n/2, n/2).
  while (n < 4 * max_size) n *= 2;
  const CircleFunction g = alpha.to_circle(n).conj() * phi.resampled(n);

  double prev = -1.0;
  for (const int m : schedule) {
    Eigen::MatrixXcd h(m, m);
    for (int j = 0; j < m; ++j) {
      for (int k = 0; k < m; ++k) {
        h(j, k) = g.coeff(-(j + k + 1));
      }
    }
    const double value = operator_norm(h);
    if (prev >= 0.0 && std::abs(value - prev) < tol) return value;
    prev = value;
  }
  throw NoConvergence("Hankel schedule exhausted without stabilizing");
}

}  // namespace mskit
