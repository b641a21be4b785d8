#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "dilatation/core/errors.hpp"
#include "dilatation/core/scale.hpp"
#include "dilatation/models/conical.hpp"
#include "dilatation/models/dyadic_integer.hpp"

namespace dilatation {

/// The boundary of the dyadic tree seen as the 2-adic integers, read at a
/// fixed precision K <= 64.
///
/// The group is (Z_2, +) with delta_{2^p} a = 2^p a and norm 2^-v(a). A word
/// of K digits stands for the 2-adic integer with the same digits followed by
/// zeros, so sums, contractions and exact divisions stay exact. The distance
/// reads the first K digits; it raises PrecisionExhausted when a chain of
/// divisions has left fewer than K digits known.
class DyadicGroup {
 public:
  using element_type = DyadicInteger;
  using scale_type = DyadicPower;

  explicit DyadicGroup(int precision = 64) : k_(precision) {
    if (precision < 1 || precision > 64) throw ModelError("dyadic precision must lie in [1, 64]");
  }

  int precision() const { return k_; }

  /// A word of K digits, digit i being bit i-1 of `bits`.
  element_type word(std::uint64_t bits) const {
    const std::uint64_t mask = k_ == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << k_) - 1);
    return DyadicInteger::from_u64(bits & mask, DyadicInteger::storage_digits);
  }

  element_type identity() const { return DyadicInteger(0, DyadicInteger::storage_digits); }
  element_type product(const element_type& a, const element_type& b) const { return a + b; }
  element_type inverse(const element_type& a) const { return -a; }
  element_type dilate(const scale_type& eps, const element_type& a) const {
    return a.shifted(eps.exponent());
  }

  /// Length of the longest common prefix of a with the zero word, capped at K.
  /// A nonzero known digit below K decides the value even when fewer than K
  /// digits are known.
  int valuation(const element_type& a) const {
    const int known = a.known() < k_ ? a.known() : k_;
    const std::uint64_t low = known == 0 ? 0 : a.digits(known);
    if (low != 0) return std::countr_zero(low);
    if (known < k_) {
      throw PrecisionExhausted("distance needs digit " + std::to_string(known + 1) + " of a word with " +
                               std::to_string(a.known()) + " known digits");
    }
    return k_;
  }

  /// 2^-v, or 0 when the first K digits vanish.
  double norm(const element_type& a) const {
    const int v = valuation(a);
    return v >= k_ ? 0.0 : std::ldexp(1.0, -v);
  }

  /// Uniform among K-digit words of norm < r.
  element_type sample(Rng& rng, double r) const {
    int v = 0;
    while (v < k_ && std::ldexp(1.0, -v) >= r) ++v;
    if (v >= k_) return word(0);
    std::uint64_t bits = rng();
    bits &= ~std::uint64_t{0} << v;
    return word(bits);
  }

  /// Words 2^j, 2^j + 2^(j+1), 2^(j+2), 2^(j+3) with 2^-j < r.
  std::vector<element_type> lattice(double r) const {
    int v = 0;
    while (v < k_ && std::ldexp(1.0, -v) >= r) ++v;
    std::vector<element_type> out;
    for (int j : {v, v + 2, v + 3}) {
      if (j < k_) out.push_back(word(std::uint64_t{1} << j));
    }
    if (v + 1 < k_) out.push_back(word((std::uint64_t{1} << v) | (std::uint64_t{1} << (v + 1))));
    if (v < k_) out.push_back(word(~std::uint64_t{0} << v));
    return out;
  }

  std::string name() const { return "dyadic(K=" + std::to_string(k_) + ")"; }

  /// The first K digits written most significant first, as "...0011" for 3.
  std::string format(const element_type& a) const {
    const int n = a.known() < k_ ? a.known() : k_;
    std::string s = "...";
    const std::uint64_t d = a.digits(n);
    for (int i = n - 1; i >= 0; --i) s += ((d >> i) & 1) ? '1' : '0';
    return s;
  }

 private:
  int k_;
};

using DyadicModel = ConicalStructure<DyadicGroup>;

inline DyadicModel make_dyadic(int precision = 64) { return DyadicModel(DyadicGroup(precision)); }

/// d(x + 2^p (y - x), y + (1 - 2^p)(x - y)): both sides of the barycentric
/// condition written as 2-adic affine combinations, p >= 1.
inline double dyadic_barycentric_defect(const DyadicModel& m, const DyadicInteger& x,
                                        const DyadicInteger& y, int p) {
  if (p < 1) throw std::invalid_argument("dyadic_barycentric_defect: need p >= 1");
  const auto one = DyadicInteger(1, DyadicInteger::storage_digits);
  const auto two_p = one.shifted(p);
  const auto lhs = x + (y - x) * two_p;
  const auto rhs = y + (x - y) * (one - two_p);
  return m.distance(lhs, rhs);
}

}  // namespace dilatation
