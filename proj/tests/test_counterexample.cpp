#include <gtest/gtest.h>

#include <complex>

#include "dilatation/affine/counterexample.hpp"
#include "dilatation/affine/probes.hpp"

using namespace dilatation;
using V = Eigen::VectorXd;
using C = std::complex<double>;

namespace {

// (x, x')(y, y') = (x + y, x' + y' + Im(x conj y) / 2), delta_l (x, x') = (l x, |l|^2 x').
V prod(const V& a, const V& b) {
  const C x(a[0], a[1]), y(b[0], b[1]);
  const C s = x + y;
  return (V(3) << s.real(), s.imag(), a[2] + b[2] + 0.5 * (x * std::conj(y)).imag()).finished();
}
V delta(C l, const V& a) {
  const C x = l * C(a[0], a[1]);
  return (V(3) << x.real(), x.imag(), std::norm(l) * a[2]).finished();
}
V dil(const V& c, C l, const V& p) { return prod(c, delta(l, prod(-c, p))); }

const auto m = make_complex_heisenberg();
const V Y = ComplexHeisenbergGroup::make({1.0, 0.0}, 1.0);
const auto probes = probe_points(m, m.group().identity(), 2.0, 0);

}  // namespace

TEST(Counterexample, CompositeOfOppositeCoefficientsIsNotATranslation) {
  const auto r = counterexample_check(m, 0.5, C(-2.0, 0.0), Y, probes);
  EXPECT_TRUE(r.verdict);
  EXPECT_GT(r.final_defect(), 1e-6);
  // C(e) = delta_{1/2}(Y delta_{-2} Y^-1) = (3/2, 0, -3/4) by hand.
  const V ce = dil(V::Zero(3), 0.5, dil(Y, -2.0, V::Zero(3)));
  EXPECT_NEAR(ce[0], 1.5, 1e-15);
  EXPECT_NEAR(ce[2], -0.75, 1e-15);
  EXPECT_EQ(r.notes.at("vertical_of_C_e"), format_double(-0.75));
  // No dilatation on the searched grid comes close.
  EXPECT_GT(std::stod(r.notes.at("dilatation_grid_min")), 0.1);
}

TEST(Counterexample, DefectIsTheGapToTheTranslation) {
  const auto r = counterexample_check(m, 0.5, C(-2.0, 0.0), Y, probes, 1e-6, false);
  const V ce = dil(V::Zero(3), 0.5, dil(Y, -2.0, V::Zero(3)));
  double worst = 0.0;
  for (const auto& p : probes) {
    worst = std::max(worst, (dil(V::Zero(3), 0.5, dil(Y, -2.0, p)) - prod(ce, p)).lpNorm<Eigen::Infinity>());
  }
  EXPECT_NEAR(r.final_defect(), worst, 1e-13);
  EXPECT_EQ(r.notes.count("dilatation_grid_min"), 0u);
}

TEST(Counterexample, PositiveProductGivesATranslation) {
  const auto r = counterexample_check(m, 0.5, C(2.0, 0.0), Y, probes, 1e-6, false);
  EXPECT_FALSE(r.verdict);
  EXPECT_LE(r.final_defect(), 1e-9);
  // A rotation in the product rotates the linear part instead.
  EXPECT_TRUE(counterexample_check(m, 0.5, C(0.0, 2.0), Y, probes, 1e-6, false).verdict);
}

TEST(Counterexample, AtTheIdentityTheCompositeIsTheDilatationByMinusOne) {
  const auto r = counterexample_check(m, 0.5, C(-2.0, 0.0), V::Zero(3), probes);
  // C = delta_{-1}: not a translation, but a dilatation with center e.
  EXPECT_TRUE(r.verdict);
  EXPECT_EQ(r.notes.at("vertical_of_C_e"), format_double(0.0));
  EXPECT_LE(std::stod(r.notes.at("dilatation_grid_min")), 1e-12);
}
