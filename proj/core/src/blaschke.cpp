#include "mskit/blaschke.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace mskit {
namespace {

double unit_double(std::mt19937_64& rng) {
  // Canonical [0,1) double from the top 53 bits, independent of library
  // distribution internals.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::string point_str(cd a) {
  std::ostringstream os;
  os << "(" << a.real() << ", " << a.imag() << ")";
  return os.str();
}

bool zero_before(const ZeroEntry& x, const ZeroEntry& y) {
  const double rx = std::abs(x.point), ry = std::abs(y.point);
  if (rx != ry) return rx < ry;
  return std::arg(x.point) < std::arg(y.point);
}

int match_index(const std::vector<ZeroEntry>& list, cd point, double tol) {
  int best = -1;
  double best_dist = tol;
  for (int i = 0; i < static_cast<int>(list.size()); ++i) {
    const double d = std::abs(list[i].point - point);
    if (d <= best_dist) {
      best_dist = d;
      best = i;
    }
  }
  return best;
}

}  // namespace

BlaschkeProduct::BlaschkeProduct(std::vector<ZeroEntry> zeros, cd constant) : constant_(constant) {
  const double mod = std::abs(constant_);
  if (std::abs(mod - 1.0) > 1e-9) {
    throw Error("Blaschke constant must be unimodular; |c| = " + std::to_string(mod));
  }
  constant_ /= mod;
  for (const auto& z : zeros) {
    if (z.multiplicity <= 0) throw Error("zero multiplicity must be positive");
    if (std::abs(z.point) >= 1.0) {
      throw Error("Blaschke zero outside the open unit disk: " + point_str(z.point));
    }
  }
  std::sort(zeros.begin(), zeros.end(), zero_before);
  for (const auto& z : zeros) {
    if (!zeros_.empty() && std::abs(zeros_.back().point - z.point) <= kZeroMatchTol) {
      zeros_.back().multiplicity += z.multiplicity;
    } else {
      zeros_.push_back(z);
    }
  }
}

BlaschkeProduct BlaschkeProduct::unit(cd constant) { return BlaschkeProduct({}, constant); }

BlaschkeProduct BlaschkeProduct::monomial(int n) {
  if (n == 0) return unit();
  return BlaschkeProduct({{0.0, n}}, 1.0);
}

BlaschkeProduct BlaschkeProduct::factor(cd a) { return BlaschkeProduct({{a, 1}}, 1.0); }

int BlaschkeProduct::degree() const {
  int d = 0;
  for (const auto& z : zeros_) d += z.multiplicity;
  return d;
}

std::vector<cd> BlaschkeProduct::expanded_zeros() const {
  std::vector<cd> out;
  out.reserve(degree());
  for (const auto& z : zeros_) out.insert(out.end(), z.multiplicity, z.point);
  return out;
}

double BlaschkeProduct::spectral_radius() const {
  double r = 0.0;
  for (const auto& z : zeros_) r = std::max(r, std::abs(z.point));
  return r;
}

cd BlaschkeProduct::evaluate(cd z) const {
  cd out = constant_;
  for (const auto& zero : zeros_) {
    const cd a = zero.point;
    if (std::abs(a) > 0.0) {
      const cd pole = 1.0 / std::conj(a);
      if (std::abs(z - pole) < 1e-14) {
        throw PoleHit("evaluation at pole " + point_str(pole));
      }
    }
    const cd f = (z - a) / (1.0 - std::conj(a) * z);
    for (int m = 0; m < zero.multiplicity; ++m) out *= f;
  }
  return out;
}

CircleFunction BlaschkeProduct::to_circle(int n) const {
  Eigen::VectorXcd s(n);
  for (int j = 0; j < n; ++j) s(j) = evaluate(grid_node(n, j));
  return CircleFunction::from_samples(std::move(s));
}

BlaschkeProduct operator*(const BlaschkeProduct& a, const BlaschkeProduct& b) {
  std::vector<ZeroEntry> zeros = a.zeros_;
  zeros.insert(zeros.end(), b.zeros_.begin(), b.zeros_.end());
  return BlaschkeProduct(std::move(zeros), a.constant_ * b.constant_);
}

BlaschkeProduct operator/(const BlaschkeProduct& num, const BlaschkeProduct& den) {
  std::vector<ZeroEntry> zeros = num.zeros_;
  for (const auto& d : den.zeros_) {
    const int i = match_index(zeros, d.point, kZeroMatchTol);
    if (i < 0 || zeros[i].multiplicity < d.multiplicity) {
      throw NotDivisible("no zero near " + point_str(d.point) + " with multiplicity " +
                         std::to_string(d.multiplicity) + " in numerator");
    }
    zeros[i].multiplicity -= d.multiplicity;
    if (zeros[i].multiplicity == 0) zeros.erase(zeros.begin() + i);
  }
  return BlaschkeProduct(std::move(zeros), num.constant_ / den.constant_);
}

BlaschkeProduct BlaschkeProduct::gcd(const BlaschkeProduct& a, const BlaschkeProduct& b) {
  std::vector<ZeroEntry> zeros;
  for (const auto& za : a.zeros_) {
    const int i = match_index(b.zeros_, za.point, kZeroMatchTol);
    if (i >= 0) {
      zeros.push_back({za.point, std::min(za.multiplicity, b.zeros_[i].multiplicity)});
    }
  }
  return BlaschkeProduct(std::move(zeros), 1.0);
}

BlaschkeProduct BlaschkeProduct::lcm(const BlaschkeProduct& a, const BlaschkeProduct& b) {
  std::vector<ZeroEntry> zeros = a.zeros_;
  for (const auto& zb : b.zeros_) {
    const int i = match_index(zeros, zb.point, kZeroMatchTol);
    if (i >= 0) {
      zeros[i].multiplicity = std::max(zeros[i].multiplicity, zb.multiplicity);
    } else {
      zeros.push_back(zb);
    }
  }
  return BlaschkeProduct(std::move(zeros), 1.0);
}

bool BlaschkeProduct::divides(const BlaschkeProduct& a, const BlaschkeProduct& b) {
  for (const auto& za : a.zeros_) {
    const int i = match_index(b.zeros_, za.point, kZeroMatchTol);
    if (i < 0 || b.zeros_[i].multiplicity < za.multiplicity) return false;
  }
  return true;
}

bool BlaschkeProduct::same_zero_multiset(const BlaschkeProduct& a, const BlaschkeProduct& b,
                                         double tol) {
  if (a.zeros_.size() != b.zeros_.size()) return false;
  for (std::size_t i = 0; i < a.zeros_.size(); ++i) {
    if (a.zeros_[i].multiplicity != b.zeros_[i].multiplicity) return false;
    if (std::abs(a.zeros_[i].point - b.zeros_[i].point) > tol) return false;
  }
  return true;
}

BlaschkeProduct BlaschkeProduct::random(int degree, std::uint64_t seed, double max_radius,
                                        bool zero_at_origin) {
  if (degree < 0) throw Error("negative degree");
  std::mt19937_64 rng(seed);
  std::vector<ZeroEntry> zeros;
  for (int i = 0; i < degree; ++i) {
    if (zero_at_origin && i == 0) {
      zeros.push_back({0.0, 1});
      continue;
    }
    const double r = max_radius * std::sqrt(unit_double(rng));
    const double t = 2.0 * std::numbers::pi * unit_double(rng);
    zeros.push_back({std::polar(r, t), 1});
  }
  const cd c = std::polar(1.0, 2.0 * std::numbers::pi * unit_double(rng));
  return BlaschkeProduct(std::move(zeros), c);
}

BlaschkeProduct BlaschkeProduct::random_with_value_at_zero(int degree, std::uint64_t seed, cd value,
                                                           double max_radius) {
  const double target = std::abs(value);
  if (degree < 1 || target <= 0.0 || target >= std::pow(max_radius, degree)) {
    throw Error("value at zero not attainable for this degree and radius");
  }
  std::mt19937_64 rng(seed);
  const double mean_mod = std::pow(target, 1.0 / degree);
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<ZeroEntry> zeros;
    double mod_product = 1.0;
    bool ok = true;
    for (int i = 0; i + 1 < degree; ++i) {
      const double r = mean_mod * std::exp(0.3 * (unit_double(rng) - 0.5));
      if (r <= 1e-3 || r >= max_radius) {
        ok = false;
        break;
      }
      zeros.push_back({std::polar(r, 2.0 * std::numbers::pi * unit_double(rng)), 1});
      mod_product *= r;
    }
    if (!ok) continue;
    const double last = target / mod_product;
    if (last <= 1e-3 || last >= max_radius) continue;
    zeros.push_back({std::polar(last, 2.0 * std::numbers::pi * unit_double(rng)), 1});
    cd prod = 1.0;
    for (const auto& z : zeros) prod *= -z.point;
    const cd c = value / prod;
    return BlaschkeProduct(std::move(zeros), c / std::abs(c));
  }
  throw Error("could not place zeros for the requested value at zero");
}

BlaschkeProduct BlaschkeProduct::jsharp() const {
  std::vector<ZeroEntry> zeros = zeros_;
  for (auto& z : zeros) z.point = std::conj(z.point);
  return BlaschkeProduct(std::move(zeros), std::conj(constant_));
}

BlaschkeProduct BlaschkeProduct::with_constant(cd constant) const {
  return BlaschkeProduct(zeros_, constant);
}

}  // namespace mskit
