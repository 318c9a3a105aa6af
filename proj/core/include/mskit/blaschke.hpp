#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "mskit/circle.hpp"
#include "mskit/errors.hpp"

namespace mskit {

/// Matching tolerance for zeros: two zeros closer than this are the same zero.
inline constexpr double kZeroMatchTol = 1e-9;

struct ZeroEntry {
  cd point;
  int multiplicity = 1;
};

/// A finite Blaschke product c * prod_j ((z - a_j)/(1 - conj(a_j) z))^{m_j}
/// with |c| = 1 and all |a_j| < 1.
///
/// Zeros are stored merged (within kZeroMatchTol) and canonically ordered by
/// (|a|, arg a), so two products are equal up to a unimodular constant exactly
/// when their zero lists compare equal. Values are immutable.
class BlaschkeProduct {
 public:
  /// Degree-zero product, i.e. the constant c.
  static BlaschkeProduct unit(cd constant = 1.0);
  /// z^n as a Blaschke product (n >= 0).
  static BlaschkeProduct monomial(int n);
  /// Elementary factor with a single zero at a.
  static BlaschkeProduct factor(cd a);

  BlaschkeProduct(std::vector<ZeroEntry> zeros, cd constant);

  int degree() const;
  bool is_unit() const { return zeros_.empty(); }
  cd constant() const { return constant_; }
  const std::vector<ZeroEntry>& zeros() const { return zeros_; }
  /// Zeros repeated with multiplicity, canonical order.
  std::vector<cd> expanded_zeros() const;
  /// Largest zero modulus (0 for the unit).
  double spectral_radius() const;

  /// Evaluates at z; throws PoleHit within 1e-14 of a pole 1/conj(a_j).
  cd evaluate(cd z) const;
  cd at_zero() const { return evaluate(0.0); }
  /// Samples on the n-point grid.
  CircleFunction to_circle(int n) const;

  friend BlaschkeProduct operator*(const BlaschkeProduct& a, const BlaschkeProduct& b);
  /// Exact quotient; throws NotDivisible naming the first unmatched zero.
  friend BlaschkeProduct operator/(const BlaschkeProduct& num, const BlaschkeProduct& den);

  /// Greatest common inner divisor; constant normalized to 1.
  static BlaschkeProduct gcd(const BlaschkeProduct& a, const BlaschkeProduct& b);
  /// Least common inner multiple; constant normalized to 1.
  static BlaschkeProduct lcm(const BlaschkeProduct& a, const BlaschkeProduct& b);
  /// True when a divides b (every zero of a appears in b with >= multiplicity).
  static bool divides(const BlaschkeProduct& a, const BlaschkeProduct& b);
  /// Equality of zero multisets, i.e. equality up to a unimodular constant.
  static bool same_zero_multiset(const BlaschkeProduct& a, const BlaschkeProduct& b,
                                 double tol = kZeroMatchTol);

  /// Deterministic random product: zeros uniform on the disk of the given
  /// radius, unimodular constant uniform on the circle.
  static BlaschkeProduct random(int degree, std::uint64_t seed, double max_radius = 0.9,
                                bool zero_at_origin = false);
  /// Random product with the prescribed value at the origin (|value| must be
  /// attainable: 0 < |value| < max_radius^degree is required).
  static BlaschkeProduct random_with_value_at_zero(int degree, std::uint64_t seed, cd value,
                                                   double max_radius = 0.9);

  /// J# conjugate-reflected product: zeros conjugated, constant conjugated.
  BlaschkeProduct jsharp() const;
  /// Same zeros, constant replaced.
  BlaschkeProduct with_constant(cd constant) const;

 private:
  std::vector<ZeroEntry> zeros_;
  cd constant_;
};

}  // namespace mskit
