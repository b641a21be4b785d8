#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>

#include "dilatation/core/errors.hpp"
#include "dilatation/core/structure.hpp"

namespace dilatation {

/// A family of isometries W^x_k of the word space, applied to a finite word
/// of `len` digits (digit i is bit i-1). Isometries of X^omega preserve
/// common prefixes, so acting on a truncated word is well defined.
using IsometryFamily =
    std::function<std::uint64_t(int k, std::uint64_t x, std::uint64_t y, int len)>;

namespace detail {
inline std::uint64_t low_mask(int len) {
  if (len <= 0) return 0;
  return len >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << len) - 1);
}

/// Common prefix length of two words of `len` digits.
inline int prefix_length(std::uint64_t a, std::uint64_t b, int len) {
  const std::uint64_t diff = (a ^ b) & low_mask(len);
  return diff == 0 ? len : std::countr_zero(diff);
}
}  // namespace detail

/// W^x_k = identity for every x and k.
inline IsometryFamily identity_isometries() {
  return [](int, std::uint64_t, std::uint64_t y, int len) { return y & detail::low_mask(len); };
}

/// W^x_k(y) = y xor (digits of x after position k). XOR with a fixed word is
/// an isometry, and the family moves only as far as x does beyond digit k.
inline IsometryFamily tail_xor_isometries() {
  return [](int k, std::uint64_t x, std::uint64_t y, int len) {
    const std::uint64_t tail = k >= 64 ? 0 : (x >> k);
    return (y ^ tail) & detail::low_mask(len);
  };
}

/// The coefficient-2 dilatation of the structure built from W, on words of
/// K digits: delta_2^{q a x} q abar y = q a xbar_1 W^{q a x}_{|q|+1}(y), and
/// delta_2^z z = z.
///
/// The base point z and argument t first differ at digit |q|+1; x_1 is the
/// digit of z right after that and is complemented. Throws PrecisionExhausted
/// when that digit lies beyond the K stored digits.
inline std::uint64_t w_dilatation(int precision, const IsometryFamily& w, std::uint64_t z,
                                  std::uint64_t t) {
  if (precision < 1 || precision > 64) throw ModelError("dyadic precision must lie in [1, 64]");
  const std::uint64_t mask = detail::low_mask(precision);
  z &= mask;
  t &= mask;
  if (z == t) return z;
  const int q = std::countr_zero(z ^ t);  // |q|
  if (q + 2 > precision) {
    throw PrecisionExhausted("the W-dilatation needs digit " + std::to_string(q + 2) + " of a " +
                             std::to_string(precision) + "-digit word");
  }
  const std::uint64_t head = z & detail::low_mask(q + 1);  // q and alpha
  const std::uint64_t flipped = (~z) & (std::uint64_t{1} << (q + 1));
  const int tail_len = precision - q - 1;  // digits of y available
  const std::uint64_t y = (t >> (q + 1)) & detail::low_mask(tail_len);
  const std::uint64_t image = w(q + 1, z, y, tail_len);
  const int room = precision - q - 2;
  const std::uint64_t tail = room > 0 ? ((image & detail::low_mask(room)) << (q + 2)) : 0;
  return (head | flipped | tail) & mask;
}

/// Largest (1/2^k) d(W^x_k(y), W^{x'}_k(y)) over sampled x, x' with
/// d(x, x') < 2^-k and words y. Zero for families that ignore x.
inline double w_smoothness_defect(int precision, const IsometryFamily& w, std::size_t samples,
                                  std::uint64_t seed) {
  if (precision < 3 || precision > 64) throw ModelError("smoothness check needs precision in [3, 64]");
  Rng rng(seed);
  std::uniform_int_distribution<int> kdist(1, precision - 2);
  const std::uint64_t mask = detail::low_mask(precision);
  double worst = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const int k = kdist(rng);
    const std::uint64_t x = rng() & mask;
    // Keep digits 1..k+1 of x, so the common prefix exceeds k.
    const std::uint64_t keep = detail::low_mask(k + 1);
    const std::uint64_t xp = ((x & keep) | (rng() & ~keep)) & mask;
    const int len = precision - k;
    const std::uint64_t y = rng() & detail::low_mask(len);
    const std::uint64_t a = w(k, x, y, len);
    const std::uint64_t b = w(k, xp, y, len);
    const int m = detail::prefix_length(a, b, len);
    const double d = m >= len ? 0.0 : std::ldexp(1.0, -m);
    worst = std::max(worst, std::ldexp(d, -k));
  }
  return worst;
}

}  // namespace dilatation
