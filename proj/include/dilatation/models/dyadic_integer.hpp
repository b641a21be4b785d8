#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "dilatation/core/errors.hpp"

namespace dilatation {

/// A 2-adic integer known modulo 2^known, stored in 128 bits.
///
/// Digit i of the infinite binary word (1-based) is bit i-1, so the longest
/// common prefix of two words is the 2-adic valuation of their difference.
/// Multiplying by 2^p moves every known digit up by p places and adds p known
/// zero digits at the bottom; dividing by 2^p gives p of them back. A value can
/// only be read at precision K when at least K digits are known, otherwise
/// PrecisionExhausted is raised instead of inventing the missing digits.
class DyadicInteger {
 public:
  using word = unsigned __int128;
  static constexpr int storage_digits = 128;

  constexpr DyadicInteger() = default;
  constexpr DyadicInteger(word bits, int known) : bits_(bits), known_(clamp_known(known)) {}

  static DyadicInteger from_u64(std::uint64_t v, int known) { return {static_cast<word>(v), known}; }
  static DyadicInteger from_i64(std::int64_t v, int known) {
    return {static_cast<word>(static_cast<__int128>(v)), known};
  }

  word bits() const { return bits_; }
  int known() const { return known_; }

  /// Low `k` digits (k <= 64) as an unsigned integer.
  std::uint64_t digits(int k) const {
    require(k);
    if (k == 0) return 0;
    const word mask = k >= 64 ? ~word{0} >> 64 : ((word{1} << k) - 1);
    return static_cast<std::uint64_t>(bits_ & mask);
  }

  /// 2-adic valuation of this value at precision k, or k if it vanishes there.
  int valuation(int k) const {
    const std::uint64_t d = digits(k);
    return d == 0 ? k : std::countr_zero(d);
  }

  DyadicInteger operator+(const DyadicInteger& o) const {
    return {bits_ + o.bits_, known_ < o.known_ ? known_ : o.known_};
  }
  DyadicInteger operator-(const DyadicInteger& o) const {
    return {bits_ - o.bits_, known_ < o.known_ ? known_ : o.known_};
  }
  DyadicInteger operator-() const { return {word{0} - bits_, known_}; }

  /// Product of two 2-adic integers. The result is known to the smaller of
  /// (known_a + v(b), known_b + v(a)) digits, capped by storage.
  DyadicInteger operator*(const DyadicInteger& o) const {
    const int va = low_valuation();
    const int vb = o.low_valuation();
    const int ka = known_ + vb;
    const int kb = o.known_ + va;
    return {bits_ * o.bits_, ka < kb ? ka : kb};
  }

  /// Multiplication by 2^p for any integer p. Division (p < 0) needs the low
  /// |p| digits to be known and zero.
  DyadicInteger shifted(int p) const {
    if (p >= 0) {
      if (p >= storage_digits) return {word{0}, storage_digits};
      return {bits_ << p, known_ + p};
    }
    const int q = -p;
    if (q > known_) {
      throw PrecisionExhausted("division by 2^" + std::to_string(q) + " needs " +
                               std::to_string(q) + " known digits, have " + std::to_string(known_));
    }
    const word low = q >= storage_digits ? bits_ : (bits_ & ((word{1} << q) - 1));
    if (low != 0) {
      throw DomainViolation("value is not divisible by 2^" + std::to_string(q) +
                            " in the dyadic integers");
    }
    return {q >= storage_digits ? word{0} : (bits_ >> q), known_ - q};
  }

  /// Exact equality of the low k digits.
  bool equal_at(const DyadicInteger& o, int k) const { return digits(k) == o.digits(k); }

 private:
  static constexpr int clamp_known(int k) {
    return k < 0 ? 0 : (k > storage_digits ? storage_digits : k);
  }
  void require(int k) const {
    if (k > 64 || k < 0) throw std::invalid_argument("DyadicInteger: precision must lie in [0, 64]");
    if (k > known_) {
      throw PrecisionExhausted("need " + std::to_string(k) + " digits, only " +
                               std::to_string(known_) + " are known");
    }
  }
  int low_valuation() const {
    const word low = bits_;
    int v = 0;
    while (v < known_ && ((low >> v) & 1) == 0) ++v;
    return v;
  }

  word bits_ = 0;
  int known_ = storage_digits;
};

}  // namespace dilatation
