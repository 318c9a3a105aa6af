#include <doctest.h>

#include <random>

#include "mskit/circle.hpp"

using mskit::cd;
using mskit::CircleFunction;

namespace {

Eigen::VectorXcd random_samples(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v[i] = cd(u(rng), u(rng));
  return v;
}

// Direct quadratic-time DFT used as the oracle for the FFT path.
Eigen::VectorXcd naive_analysis(const Eigen::VectorXcd& samples) {
  const int n = static_cast<int>(samples.size());
  Eigen::VectorXcd c(n);
  for (int m = 0; m < n; ++m) {
    cd acc = 0.0;
    for (int j = 0; j < n; ++j) {
      double t = -2.0 * M_PI * m * j / n;
      acc += samples[j] * cd(std::cos(t), std::sin(t));
    }
    c[m] = acc / static_cast<double>(n);
  }
  return c;
}

}  // namespace

TEST_CASE("coefficients match a direct DFT") {
  const int n = 64;
  Eigen::VectorXcd samples = random_samples(n, 11);
  CircleFunction f = CircleFunction::from_samples(samples);
  Eigen::VectorXcd direct = naive_analysis(samples);
  for (int k = -n / 2; k < n / 2; ++k) {
    CHECK(std::abs(f.coeff(k) - direct[(k % n + n) % n]) < 1e-12);
  }
}

TEST_CASE("coefficient banding round trips") {
  const int n = 128;
  Eigen::VectorXcd band(5);
  band << cd(1, 2), cd(0, -1), cd(3, 0), cd(-2, 2), cd(0.5, 0.5);
  CircleFunction f = CircleFunction::from_coefficients(-2, band, n);
  for (int k = 0; k < 5; ++k) CHECK(std::abs(f.coeff(k - 2) - band[k]) < 1e-13);
  CHECK(std::abs(f.coeff(7)) < 1e-13);
  CHECK(f.effective_band() == 2);
  CHECK(f.exact_band());
  CHECK_THROWS_AS(f.coeff(n), mskit::GridMismatch);
  CHECK_THROWS_AS(CircleFunction::from_samples(Eigen::VectorXcd::Zero(48)), mskit::GridMismatch);
}

TEST_CASE("pointwise algebra matches sample arithmetic") {
  const int n = 64;
  CircleFunction f = CircleFunction::from_samples(random_samples(n, 3));
  CircleFunction g = CircleFunction::from_samples(random_samples(n, 4));
  CHECK(((f + g).samples() - (f.samples() + g.samples())).norm() < 1e-14);
  CHECK(((f - g).samples() - (f.samples() - g.samples())).norm() < 1e-14);
  CHECK(((f * g).samples() - f.samples().cwiseProduct(g.samples())).norm() < 1e-14);
  CHECK(((f * cd(0, 2)).samples() - cd(0, 2) * f.samples()).norm() < 1e-14);
  CHECK((f.conj().samples() - f.samples().conjugate()).norm() < 1e-14);
  CHECK_THROWS_AS(f + CircleFunction::constant(1.0, 2 * n), mskit::GridMismatch);
}

TEST_CASE("analytic and coanalytic projections split the spectrum") {
  const int n = 64;
  CircleFunction f = CircleFunction::from_samples(random_samples(n, 7));
  CircleFunction plus = f.p_plus();
  CircleFunction minus = f.p_minus();
  CHECK(((plus + minus).samples() - f.samples()).norm() < 1e-12);
  for (int k = -n / 2; k < 0; ++k) CHECK(std::abs(plus.coeff(k)) < 1e-13);
  for (int k = 0; k < n / 2; ++k) CHECK(std::abs(minus.coeff(k)) < 1e-13);
  CHECK(std::abs(plus.inner(minus)) < 1e-13);
}

TEST_CASE("shifted analytic projection uses the inner factor") {
  const int n = 256;
  CircleFunction z3 = CircleFunction::monomial(3, n);
  CircleFunction f = CircleFunction::from_coefficients(-4, random_samples(9, 5), n);
  CircleFunction p = f.p_shifted_h2(z3);
  // alpha = z^3: the projection keeps exactly the coefficients k >= 3.
  for (int k = -6; k < 3; ++k) CHECK(std::abs(p.coeff(k)) < 1e-13);
  for (int k = 3; k <= 4; ++k) CHECK(std::abs(p.coeff(k) - f.coeff(k)) < 1e-13);
}

TEST_CASE("jsharp conjugates coefficients in place") {
  const int n = 64;
  CircleFunction f = CircleFunction::from_samples(random_samples(n, 9));
  CircleFunction fs = f.jsharp();
  for (int k = -8; k <= 8; ++k) CHECK(std::abs(fs.coeff(k) - std::conj(f.coeff(k))) < 1e-12);
  CHECK((fs.jsharp().samples() - f.samples()).norm() < 1e-12);
}

TEST_CASE("inner product and norm agree with direct sums") {
  const int n = 32;
  CircleFunction f = CircleFunction::from_samples(random_samples(n, 13));
  CircleFunction g = CircleFunction::from_samples(random_samples(n, 14));
  cd direct = 0.0;
  for (int j = 0; j < n; ++j) direct += f.samples()[j] * std::conj(g.samples()[j]);
  direct /= static_cast<double>(n);
  CHECK(std::abs(f.inner(g) - direct) < 1e-13);
  CHECK(f.norm() == doctest::Approx(std::sqrt(f.inner(f).real())).epsilon(1e-12));
  CHECK(f.sup_abs() == doctest::Approx(f.samples().cwiseAbs().maxCoeff()));
}

TEST_CASE("resampling transfers banded content exactly") {
  const int n = 64;
  CircleFunction f = CircleFunction::from_coefficients(-3, random_samples(9, 21), n);
  CircleFunction g = f.resampled(4 * n);
  CHECK(g.grid_size() == 4 * n);
  for (int k = -6; k <= 6; ++k) CHECK(std::abs(g.coeff(k) - f.coeff(k)) < 1e-13);
}

TEST_CASE("monomials and constants") {
  const int n = 32;
  CircleFunction z = CircleFunction::monomial(1, n);
  CircleFunction zm = CircleFunction::monomial(-2, n);
  CHECK(std::abs(z.coeff(1) - 1.0) < 1e-14);
  CHECK(std::abs(zm.coeff(-2) - 1.0) < 1e-14);
  CHECK(std::abs((z * zm).coeff(-1) - 1.0) < 1e-13);
  CHECK((CircleFunction::constant(cd(2, -1), n).samples().array() - cd(2, -1)).matrix().norm() <
        1e-14);
  CircleFunction viaf = CircleFunction::from_function([](cd w) { return w * w; }, n);
  CHECK(std::abs(viaf.coeff(2) - 1.0) < 1e-13);
}
