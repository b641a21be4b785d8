#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "dilatation/core/harness.hpp"
#include "dilatation/emergent/induced.hpp"
#include "dilatation/emergent/tangent.hpp"
#include "dilatation/models/euclidean.hpp"
#include "dilatation/models/heisenberg.hpp"
#include "dilatation/models/pullback.hpp"

using namespace dilatation;
using V = Eigen::VectorXd;

namespace {

V vec(std::initializer_list<double> xs) {
  V v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

/// Forwards a structure but hides its closed-form tangent operations, so the
/// numerical limits are exercised.
template <class M>
struct Opaque {
  using point_type = point_t<M>;
  using scale_type = scale_t<M>;
  M m;
  point_type dilate(const point_type& x, const scale_type& e, const point_type& y) const { return m.dilate(x, e, y); }
  double distance(const point_type& a, const point_type& b) const { return m.distance(a, b); }
  double point_gap(const point_type& a, const point_type& b) const { return m.point_gap(a, b); }
  double domain_radius() const { return m.domain_radius(); }
  double codomain_radius() const { return m.codomain_radius(); }
  double closeness_budget() const { return m.closeness_budget(); }
  point_type sample_near(const point_type& c, double r, Rng& rng) const { return m.sample_near(c, r, rng); }
  std::string name() const { return "opaque(" + m.name() + ")"; }
  std::string format_point(const point_type& p) const { return m.format_point(p); }
};

// H(1) product written out: (a, b, c)(a', b', c') = (a + a', b + b', c + c' + (ab' - ba')/2).
V h1(const V& p, const V& q) {
  return vec({p[0] + q[0], p[1] + q[1], p[2] + q[2] + 0.5 * (p[0] * q[1] - p[1] * q[0])});
}

const auto fine = dyadic_grid<PositiveReal>(2, 20);
// The numerical Heisenberg limits expand vertical roundoff by nu^-2, so they
// stop at 2^-12.
const auto coarse = dyadic_grid<PositiveReal>(2, 12);

}  // namespace

static_assert(ExactTangent<EuclideanModel>);
static_assert(!ExactTangent<Opaque<EuclideanModel>>);

TEST(Tangent, EuclideanSumAndInverse) {
  const auto e = make_euclidean(1);
  const Opaque<EuclideanModel> o{e};
  const V x = vec({0}), u = vec({2}), v = vec({3});
  EXPECT_EQ(tangent_limit(e, x, u, v, TangentOp::Sum, fine).first[0], 5.0);
  EXPECT_EQ(tangent_limit(e, x, u, u, TangentOp::Inverse, fine).first[0], -3.0 + 1.0);
  EXPECT_NEAR(tangent_limit(o, x, u, v, TangentOp::Sum, fine).first[0], 5.0, 1e-5);
  EXPECT_NEAR(tangent_limit(o, x, vec({3}), vec({3}), TangentOp::Inverse, fine).first[0], -3.0, 1e-5);
  EXPECT_NEAR(tangent_limit(o, vec({1}), vec({2}), vec({5}), TangentOp::Difference, fine).first[0], 4.0, 1e-5);
}

TEST(Tangent, HeisenbergSumIsTheGroupProduct) {
  const auto h = make_heisenberg(1);
  const Opaque<HeisenbergModel> o{h};
  const V x = V::Zero(3), u = vec({1, 0, 0}), v = vec({0, 1, 0});
  const auto [exact, rep] = tangent_limit(h, x, u, v, TangentOp::Sum, fine);
  EXPECT_LE((exact - vec({1, 1, 0.5})).lpNorm<Eigen::Infinity>(), 1e-15);
  EXPECT_TRUE(rep.verdict);
  // The grid values approach it at rate one: the gap at eps is eps (see the
  // closed form u (delta_eps u)^-1 v).
  for (std::size_t i = 0; i < rep.defect.size(); ++i) EXPECT_NEAR(rep.defect[i], rep.nu[i], 1e-9);
  const auto approx = tangent_limit(o, x, u, v, TangentOp::Sum, fine).first;
  EXPECT_LE((approx - vec({1, 1, 0.5})).lpNorm<Eigen::Infinity>(), 1e-5);
}

TEST(Tangent, ExactAndNumericalAgreeAwayFromTheIdentity) {
  const auto h = make_heisenberg(1);
  const Opaque<HeisenbergModel> o{h};
  Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    const V x = h.sample_near(V::Zero(3), 0.5, rng);
    const V u = h.sample_near(x, 0.2, rng), v = h.sample_near(x, 0.2, rng);
    // Sigma^x(u, v) = u x^-1 v by the written-out product.
    const V oracle = h1(h1(u, -x), v);
    for (TangentOp op : {TangentOp::Sum, TangentOp::Difference, TangentOp::Inverse}) {
      const V a = tangent_limit(h, x, u, v, op, fine).first;
      const V b = tangent_limit(o, x, u, v, op, coarse).first;
      EXPECT_LE((a - b).lpNorm<Eigen::Infinity>(), 1e-3) << to_string(op);
    }
    EXPECT_LE((tangent_limit(h, x, u, v, TangentOp::Sum, fine).first - oracle).lpNorm<Eigen::Infinity>(), 1e-14);
  }
}

TEST(Tangent, TangentDilatation) {
  const TangentSpace<EuclideanModel> te(make_euclidean(1), vec({0}), fine);
  EXPECT_NEAR(tangent_dilate(te, vec({1}), PositiveReal(0.5), vec({3}))[0], 2.0, 1e-15);

  const TangentSpace<HeisenbergModel> th(make_heisenberg(1), V::Zero(3), fine);
  const V u = vec({0.3, -0.1, 0.2}), y = vec({-0.2, 0.4, 0.05});
  const double e = 0.25;
  // At the identity: u delta_e(u^-1 y).
  const V w = h1(-u, y);
  const V oracle = h1(u, vec({e * w[0], e * w[1], e * e * w[2]}));
  EXPECT_LE((tangent_dilate(th, u, PositiveReal(e), y) - oracle).lpNorm<Eigen::Infinity>(), 1e-15);
}

TEST(Tangent, LocalGroupLaws) {
  const auto h = make_heisenberg(1);
  const TangentSpace<HeisenbergModel> th(h, vec({0.1, 0.2, -0.1}), fine);
  const TangentSpace<Opaque<HeisenbergModel>> to(Opaque<HeisenbergModel>{h}, vec({0.1, 0.2, -0.1}), coarse);
  std::vector<std::array<V, 3>> triples;
  Rng rng(2);
  for (int i = 0; i < 10; ++i) {
    triples.push_back({h.sample_near(th.base(), 0.2, rng), h.sample_near(th.base(), 0.2, rng),
                       h.sample_near(th.base(), 0.2, rng)});
  }
  EXPECT_LE(tangent_group_law_defect(th, triples), 1e-12);
  EXPECT_LE(tangent_group_law_defect(to, triples), 5e-3);
}

TEST(Tangent, LeftTranslationsCommuteWithTangentOperations) {
  const auto h = make_heisenberg(1);
  const auto l = h.left_translation(vec({0.5, -0.3, 0.7}));
  Rng rng(4);
  for (int i = 0; i < 20; ++i) {
    const V x = h.sample_near(V::Zero(3), 0.5, rng);
    const V u = h.sample_near(x, 0.2, rng), v = h.sample_near(x, 0.2, rng);
    EXPECT_LE((l(h.tangent_sum(x, u, v)) - h.tangent_sum(l(x), l(u), l(v))).lpNorm<Eigen::Infinity>(), 1e-14);
    EXPECT_LE((l(h.tangent_inverse(x, u)) - h.tangent_inverse(l(x), l(u))).lpNorm<Eigen::Infinity>(), 1e-14);
    EXPECT_NEAR(h.tangent_distance(x, u, v), h.tangent_distance(l(x), l(u), l(v)), 1e-14);
  }
}

TEST(Tangent, OscillatingChartHasNoLimit) {
  // psi(t) = t (2 + sin log |t|) is monotone but rescales differently at
  // every scale, so the approximate sums keep turning.
  auto psi = [](double t) { return t == 0.0 ? 0.0 : t * (2.0 + std::sin(std::log(std::abs(t)))); };
  auto inv = [psi](double s) {
    double lo = -10.0, hi = 10.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (psi(mid) < s ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  const Chart c{"wobble", [psi](const V& a) { return vec({psi(a[0])}); },
                [inv](const V& a) { return vec({inv(a[0])}); }, 0.5};
  const auto pb = PullbackStructure<EuclideanGroup>(EuclideanGroup(1), c);
  const Opaque<PullbackStructure<EuclideanGroup>> o{pb};
  EXPECT_THROW(tangent_limit(o, vec({0}), vec({0.2}), vec({0.3}), TangentOp::Sum, fine), NonConvergent);
}

TEST(Tangent, RejectsBadGrids) {
  const auto e = make_euclidean(1);
  EXPECT_THROW(tangent_limit(e, vec({0}), vec({1}), vec({1}), TangentOp::Sum, dyadic_grid<PositiveReal>(2, 2)),
               std::invalid_argument);
  EXPECT_THROW(tangent_limit(e, vec({0}), vec({1}), vec({1}), TangentOp::Sum, dyadic_grid<PositiveReal>(4, 2)),
               std::invalid_argument);
}

TEST(Induced, IsADilatationStructure) {
  const auto h = make_heisenberg(1);
  const auto ind = induced_structure(h, vec({0.2, -0.1, 0.05}), PositiveReal(0.25));
  for (Axiom a : {Axiom::A1, Axiom::A2, Axiom::A3, Axiom::A4, Axiom::ConeProperty}) {
    const auto g = default_grid(a);
    const auto rep = verify_axiom(ind, a, Region<V>{ind.base_point(), 0.5},
                                  dyadic_grid<PositiveReal>(g.kmin, g.kmax), 24, 3);
    EXPECT_TRUE(rep.verdict) << to_string(a);
  }
}

TEST(Induced, SumUndoesTheInducedDilatation) {
  const auto pb = make_pullback(EuclideanGroup(2), cubic_chart());
  const V x = vec({0.05, 0.02});
  const PositiveReal mu(0.5);
  const auto ind = induced_structure(pb, x, mu);
  Rng rng(9);
  for (int i = 0; i < 20; ++i) {
    const V u = pb.sample_near(x, 0.1, rng);
    EXPECT_LE((approx_sum(pb, x, mu, u, pb.dilate(x, mu, u)) - u).lpNorm<Eigen::Infinity>(), 1e-14);
  }
  EXPECT_NE(ind.name().find("mu=0.5"), std::string::npos);
}

TEST(Induced, TangentOperationsAreConjugated) {
  const auto pb = make_pullback(EuclideanGroup(2), cubic_chart());
  const V x = vec({0.05, 0.02});
  const auto ind = induced_structure(pb, x, PositiveReal(0.5));
  const Opaque<InducedStructure<PullbackStructure<EuclideanGroup>>> o{ind};
  const V y = vec({0.1, 0.0}), u = vec({0.12, 0.03}), v = vec({0.08, -0.02});
  const auto grid = dyadic_grid<PositiveReal>(2, 16);
  const V a = ind.tangent_sum(y, u, v);
  const V b = tangent_limit(o, y, u, v, TangentOp::Sum, grid).first;
  EXPECT_LE((a - b).lpNorm<Eigen::Infinity>(), 1e-5);
  const auto [dx, rep] = estimate_dx(o, y, u, v, dyadic_grid<PositiveReal>(2, 14));
  EXPECT_NEAR(ind.tangent_distance(y, u, v), dx, 1e-6);
}

TEST(Induced, SumIsAnIsometryBetweenInducedDistances) {
  const auto h = make_heisenberg(1);
  const auto ind = induced_structure(h, vec({0.2, -0.1, 0.05}), PositiveReal(0.25));
  Rng rng(11);
  for (int i = 0; i < 20; ++i) {
    const V u = h.sample_near(ind.base_point(), 0.3, rng);
    const V v = h.sample_near(u, 0.3, rng), w = h.sample_near(u, 0.3, rng);
    EXPECT_LE(ind.isometry_defect(u, v, w), 1e-12);
  }
  // delta^x_mu Sigma^x_mu(u, v) = delta^{delta^x_mu u}_mu v, so the identity
  // holds at every scale, also without linearity.
  const auto pb = make_pullback(EuclideanGroup(2), cubic_chart());
  const V u = vec({0.1, 0.05}), v = vec({0.15, -0.05}), w = vec({0.02, 0.1});
  for (double mu : {0.5, 0.0625}) {
    EXPECT_LE(induced_structure(pb, vec({0.1, 0.1}), PositiveReal(mu)).isometry_defect(u, v, w), 1e-14);
  }
}

TEST(Induced, RejectsNonContractingMu) {
  EXPECT_THROW(induced_structure(make_euclidean(1), vec({0}), PositiveReal(1.0)), std::invalid_argument);
}
