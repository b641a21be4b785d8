#include <gtest/gtest.h>

#include <cmath>

#include "dilatation/emergent/affine_map.hpp"
#include "dilatation/emergent/linearity.hpp"
#include "dilatation/emergent/pansu.hpp"
#include "dilatation/models/carnot.hpp"
#include "dilatation/models/complex_heisenberg.hpp"
#include "dilatation/models/dyadic.hpp"
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

template <class M>
double worst_linearity_gap(const M& m, const typename M::point_type& c, int trials) {
  using S = scale_t<M>;
  Rng rng(21);
  std::uniform_real_distribution<double> unit(0.05, 0.95);
  double worst = 0.0;
  for (int i = 0; i < trials; ++i) {
    const auto x = m.sample_near(c, 0.8, rng), y = m.sample_near(c, 0.8, rng), z = m.sample_near(c, 0.8, rng);
    const S e = S::from_nu(unit(rng)), mu = S::from_nu(unit(rng));
    worst = std::max(worst, linearity_gap(m, x, y, z, e, mu));
  }
  return worst;
}

// The cubic pullback on R written from scratch: delta^x_e y = x + phi(e psi(y - x)).
double psi(double t) { return t + t * t * t; }
double phi(double s) {
  double lo = -2.0, hi = 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (psi(mid) < s ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}
double cubic_dilate(double x, double e, double y) { return x + phi(e * psi(y - x)); }

const auto pb1 = make_pullback(EuclideanGroup(1), cubic_chart());
const auto pb2 = make_pullback(EuclideanGroup(2), cubic_chart());

}  // namespace

TEST(Linearity, ConicalModelsAreLinear) {
  EXPECT_LE(worst_linearity_gap(make_euclidean(3), V::Zero(3), 200), 1e-12);
  EXPECT_LE(worst_linearity_gap(make_heisenberg(1), V::Zero(3), 200), 1e-9);
  EXPECT_LE(worst_linearity_gap(make_heisenberg(2), V::Zero(5), 200), 1e-9);
  EXPECT_LE(worst_linearity_gap(make_carnot(CarnotSpec::engel()), V::Zero(4), 200), 1e-9);
  EXPECT_LE(worst_linearity_gap(make_complex_heisenberg(), V::Zero(3), 200), 1e-9);
  const auto d = make_dyadic(64);
  EXPECT_EQ(worst_linearity_gap(d, d.group().identity(), 200), 0.0);
}

TEST(Linearity, LinDefectMatchesAHandWrittenPullback) {
  const double x = 0.05, y = 0.2, z = -0.1, e = 0.5, mu = 0.3;
  const double lhs = cubic_dilate(x, e, cubic_dilate(y, mu, z));
  const double rhs = cubic_dilate(cubic_dilate(x, e, y), mu, cubic_dilate(x, e, z));
  const double got = lin_defect(pb1, vec({x}), vec({y}), vec({z}), PositiveReal(e), PositiveReal(mu));
  EXPECT_NEAR(got, std::abs(lhs - rhs), 1e-14);
  EXPECT_GT(got, 1e-4);
}

TEST(Linearity, PullbackIsNotLinearAtFiniteScale) {
  EXPECT_GT(lin_defect(pb2, vec({0, 0}), vec({0.2, 0}), vec({0, 0.2}), PositiveReal(0.5), PositiveReal(0.5)), 1e-3);
}

TEST(Linearity, InfinitesimalLinearityOfThePullback) {
  const auto grid = dyadic_grid<PositiveReal>(3, 10);
  const auto rep = inflin_scan(pb2, vec({0, 0}), vec({0.2, 0}), vec({0, 0.2}), grid);
  EXPECT_TRUE(rep.verdict);
  for (std::size_t i = 1; i < rep.defect.size(); ++i) EXPECT_LT(rep.defect[i], rep.defect[i - 1]);
  EXPECT_LT(rep.final_defect(), 1e-3 * rep.initial_defect());
  // Each value is Lin(x, delta^x_e y, z; e, e) / e^2 on the hand-written pullback.
  const double x = 0.0, y = 0.2, z = 0.1;
  const auto r1 = inflin_scan(pb1, vec({x}), vec({y}), vec({z}), grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double e = grid[i].nu();
    const double w = cubic_dilate(x, e, y);
    const double oracle =
        std::abs(cubic_dilate(x, e, cubic_dilate(w, e, z)) - cubic_dilate(cubic_dilate(x, e, w), e, cubic_dilate(x, e, z))) /
        (e * e);
    EXPECT_NEAR(r1.defect[i], oracle, 1e-12 / (e * e));
  }
}

TEST(Linearity, InfinitesimalLinearityOfLinearModels) {
  const auto grid = dyadic_grid<PositiveReal>(3, 10);
  const auto h = make_heisenberg(1);
  const auto rep = inflin_scan(h, vec({0.1, 0, 0}), vec({0.3, 0.2, 0.1}), vec({-0.2, 0.1, 0.3}), grid);
  EXPECT_TRUE(rep.verdict);
  EXPECT_EQ(rep.notes.at("zero_points"), std::to_string(grid.size()));
  const auto e = make_euclidean(2);
  EXPECT_TRUE(inflin_scan(e, vec({0, 0}), vec({1, 0}), vec({0, 1}), grid).verdict);
}

TEST(Linearity, FirstOrderLinearityScan) {
  const auto grid = dyadic_grid<PositiveReal>(3, 10);
  const auto rep = plin1_scan(pb2, vec({0, 0}), vec({0.2, 0}), vec({0, 0.2}), grid);
  EXPECT_TRUE(rep.verdict);
  EXPECT_LT(rep.final_defect(), 1e-4);
  EXPECT_TRUE(plin1_scan(make_heisenberg(1), V::Zero(3), vec({0.3, 0.2, 0.1}), vec({-0.2, 0.1, 0.3}), grid).verdict);
}

TEST(Linearity, MetricTangentScan) {
  const auto grid = dyadic_grid<PositiveReal>(2, 10);
  const auto rep = metric_tangent_scan(pb2, vec({0.1, 0}), grid, 32, 5);
  EXPECT_TRUE(rep.verdict);
  EXPECT_LT(rep.final_defect(), rep.initial_defect());
  EXPECT_LE(metric_tangent_scan(make_heisenberg(1), V::Zero(3), grid, 32, 5).max_defect(), 1e-9);
  EXPECT_THROW(metric_tangent_scan(pb2, vec({0, 0}), grid, 0, 5), std::invalid_argument);
}

TEST(Linearity, ScansRejectBadGrids) {
  const auto bad = dyadic_grid<PositiveReal>(3, 3);
  EXPECT_THROW(inflin_scan(pb2, vec({0, 0}), vec({0.2, 0}), vec({0, 0.2}), bad), std::invalid_argument);
  EXPECT_THROW(plin1_scan(pb2, vec({0, 0}), vec({0.2, 0}), vec({0, 0.2}), bad), std::invalid_argument);
}

TEST(AffineMap, LinearMapsOfEuclideanSpace) {
  const auto e = make_euclidean(2);
  Eigen::Matrix2d a;
  a << 2.0, -1.0, 0.5, 3.0;
  const V b = vec({0.3, -0.7});
  const PointMap<EuclideanModel> t = [&](const V& p) { return V(a * p + b); };
  const auto rep = check_affine_map(e, t, Region<V>{V::Zero(2), 1.0}, 32, 5, dyadic_grid<PositiveReal>(1, 3));
  EXPECT_TRUE(rep.verdict);
  EXPECT_LE(rep.max_defect(), 1e-12);
  // Lipschitz constant of A: its largest singular value.
  const double sigma = Eigen::JacobiSVD<Eigen::Matrix2d>(a).singularValues()[0];
  EXPECT_LE(std::stod(rep.notes.at("lipschitz_estimate")), sigma + 1e-9);
}

TEST(AffineMap, HeisenbergLeftTranslation) {
  const auto h = make_heisenberg(1);
  const PointMap<HeisenbergModel> t = h.left_translation(vec({0.3, -0.2, 0.1}));
  const auto rep = check_affine_map(h, t, Region<V>{V::Zero(3), 1.0}, 32, 5, dyadic_grid<PositiveReal>(1, 3));
  EXPECT_TRUE(rep.verdict);
  EXPECT_LE(rep.max_defect(), 1e-9);
  EXPECT_NEAR(std::stod(rep.notes.at("lipschitz_estimate")), 1.0, 1e-9);
}

TEST(AffineMap, NonlinearMapFails) {
  const auto e = make_euclidean(2);
  const PointMap<EuclideanModel> t = [](const V& p) { return vec({p[0] * p[0], p[1]}); };
  const auto rep = check_affine_map(e, t, Region<V>{V::Zero(2), 1.0}, 32, 5, dyadic_grid<PositiveReal>(1, 3));
  EXPECT_FALSE(rep.verdict);
  EXPECT_GT(rep.max_defect(), 0.01);
}

TEST(Pansu, IdentityAndHomogeneousMaps) {
  const auto h = make_heisenberg(1);
  const auto grid = dyadic_grid<PositiveReal>(2, 10);
  const V x = vec({0.2, -0.1, 0.3}), u = vec({0.5, 0.1, -0.2});
  const auto [q, rep] = pansu_derivative<HeisenbergModel, HeisenbergModel>(h, h, [](const V& p) { return p; }, x, u, grid);
  EXPECT_LE((q - u).lpNorm<Eigen::Infinity>(), 1e-9);
  EXPECT_TRUE(rep.verdict);
  // delta_l is a group automorphism: its derivative at x sends u to delta_l u.
  const double l = 0.7;
  auto dl = [l](const V& p) { return vec({l * p[0], l * p[1], l * l * p[2]}); };
  const auto [q2, rep2] = pansu_derivative<HeisenbergModel, HeisenbergModel>(h, h, dl, x, u, grid);
  EXPECT_LE((q2 - dl(u)).lpNorm<Eigen::Infinity>(), 1e-9);
  EXPECT_LT(std::stod(rep2.notes.at("residual")), 1e-9);
}

TEST(Pansu, SmoothEuclideanMapMatchesTheJacobian) {
  const auto e = make_euclidean(2);
  auto f = [](const V& p) { return vec({std::sin(p[0]) * p[1], std::cos(p[1]) + p[0] * p[0]}); };
  const V x = vec({0.3, -0.4}), u = vec({0.5, 0.1});
  // Central differences with step 1e-5.
  Eigen::Matrix2d j;
  for (int c = 0; c < 2; ++c) {
    V h = V::Zero(2);
    h[c] = 1e-5;
    j.col(c) = (f(x + h) - f(x - h)) / 2e-5;
  }
  const V oracle = f(x) + j * (u - x);
  const auto [q, rep] =
      pansu_derivative<EuclideanModel, EuclideanModel>(e, e, f, x, u, dyadic_grid<PositiveReal>(4, 24));
  EXPECT_LE((q - oracle).lpNorm<Eigen::Infinity>(), 1e-6);
  EXPECT_TRUE(rep.verdict);
}

TEST(Pansu, OscillationIsNotDifferentiable) {
  const auto e = make_euclidean(1);
  auto f = [](const V& p) { return vec({p[0] == 0.0 ? 0.0 : p[0] * std::sin(std::log(std::abs(p[0])))}); };
  EXPECT_THROW((pansu_derivative<EuclideanModel, EuclideanModel>(e, e, f, vec({0}), vec({1}),
                                                                dyadic_grid<PositiveReal>(2, 12))),
               NonConvergent);
}
