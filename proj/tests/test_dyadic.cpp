#include <gtest/gtest.h>

#include <bit>
#include <cmath>

#include "dilatation/models/dyadic.hpp"
#include "dilatation/models/dyadic_w.hpp"

using namespace dilatation;

namespace {

// Word distance straight from the definition: 2^-m with m the length of the
// longest common prefix of the first K digits.
double prefix_distance(std::uint64_t a, std::uint64_t b, int k) {
  for (int m = 0; m < k; ++m) {
    if (((a >> m) & 1) != ((b >> m) & 1)) return std::ldexp(1.0, -m);
  }
  return 0.0;
}

}  // namespace

TEST(Dyadic, DistanceIsCommonPrefix) {
  const auto m = make_dyadic(64);
  const auto& g = m.group();
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t a = rng(), b = rng() & (rng() | 0xffff0000ffffULL);
    EXPECT_EQ(m.distance(g.word(a), g.word(b)), prefix_distance(a, b, 64));
  }
}

TEST(Dyadic, TrivialDilatationExample) {
  const auto m = make_dyadic(64);
  const auto& g = m.group();
  const auto x = g.word(1), y = g.word(3);
  // Coefficient 2 is DyadicPower(1): 1 + 2 (3 - 1) = 5.
  const auto r = m.dilate(x, DyadicPower(1), y);
  EXPECT_EQ(r.digits(64), 5u);
  EXPECT_EQ(m.distance(x, r), 0.25);
  EXPECT_EQ(m.distance(x, r), DyadicPower(1).nu() * m.distance(x, y));
}

TEST(Dyadic, UltrametricAndA1HoldExactly) {
  const auto m = make_dyadic(64);
  const auto& g = m.group();
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const auto x = g.word(rng()), y = g.word(rng()), z = g.word(rng());
    EXPECT_LE(m.distance(x, z), std::max(m.distance(x, y), m.distance(y, z)));
    const DyadicPower a(static_cast<int>(rng() % 5)), b(static_cast<int>(rng() % 5));
    EXPECT_EQ(m.dilate(x, DyadicPower::identity(), y).digits(64), y.digits(64));
    EXPECT_EQ(m.dilate(x, a, x).digits(64), x.digits(64));
    EXPECT_EQ(m.dilate(x, a, m.dilate(x, b, y)).digits(64), m.dilate(x, a * b, y).digits(64));
    EXPECT_EQ(m.distance(m.dilate(x, a, y), m.dilate(x, a, z)), a.nu() * m.distance(y, z));
  }
}

TEST(Dyadic, ExpansionGivesBackContractedDigits) {
  const auto m = make_dyadic(64);
  const auto& g = m.group();
  const auto x = g.word(0x1234), y = g.word(0xdeadbeefcafeULL);
  const auto back = m.dilate(x, DyadicPower(-3), m.dilate(x, DyadicPower(3), y));
  EXPECT_EQ(back.digits(64), y.digits(64));
}

TEST(Dyadic, UnknownDigitsRaise) {
  const DyadicGroup g(64);
  const DyadicInteger partial(0, 10);  // only 10 zero digits known
  EXPECT_THROW(g.valuation(partial), PrecisionExhausted);
  EXPECT_EQ(g.valuation(DyadicInteger(0b1000, 10)), 3);
}

TEST(Dyadic, BarycentricIdentityIsExact) {
  const auto m = make_dyadic(64);
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    EXPECT_EQ(dyadic_barycentric_defect(m, m.group().word(rng()), m.group().word(rng()), 1 + i % 7), 0.0);
  }
}

TEST(DyadicW, FixesTheBasePoint) {
  for (std::uint64_t x : {0ULL, 5ULL, 0xffffULL}) {
    EXPECT_EQ(w_dilatation(16, identity_isometries(), x, x), x);
  }
}

TEST(DyadicW, IdentityFamilyFollowsTheDisplayedFormula) {
  const int k = 16;
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    // z = 0 x (alpha = 0), t = 1 y (alpha-bar = 1), q empty.
    const std::uint64_t xw = rng() & 0x7fff, yw = rng() & 0x7fff;
    const std::uint64_t z = xw << 1, t = (yw << 1) | 1;
    std::uint64_t expect = 0;                         // digit 1: alpha = 0
    expect |= ((~xw) & 1) << 1;                       // digit 2: complement of x_1
    expect |= (yw & ((1ULL << (k - 2)) - 1)) << 2;    // then y, truncated to K digits
    EXPECT_EQ(w_dilatation(k, identity_isometries(), z, t), expect);
  }
}

TEST(DyadicW, ContractsByOneHalf) {
  const int k = 32;
  Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    const std::uint64_t z = rng() & 0xffffffffULL, t = rng() & 0xffffffffULL;
    if (std::countr_zero(z ^ t) + 2 > k) continue;
    for (const auto& w : {identity_isometries(), tail_xor_isometries()}) {
      const std::uint64_t r = w_dilatation(k, w, z, t);
      EXPECT_EQ(prefix_distance(z, r, k), 0.5 * prefix_distance(z, t, k));
    }
  }
}

TEST(DyadicW, RunsOutOfDigits) {
  const std::uint64_t z = 0, t = 1ULL << 15;  // first difference at digit 16
  EXPECT_THROW(w_dilatation(16, identity_isometries(), z, t), PrecisionExhausted);
  EXPECT_NO_THROW(w_dilatation(17, identity_isometries(), z, t));
}

TEST(DyadicW, SmoothnessOfFamilies) {
  EXPECT_EQ(w_smoothness_defect(32, identity_isometries(), 500, 1), 0.0);
  const double d = w_smoothness_defect(32, tail_xor_isometries(), 500, 1);
  EXPECT_GT(d, 0.0);
  EXPECT_LE(d, 0.25);
}
