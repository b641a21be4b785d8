#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dilatation/core/errors.hpp"
#include "dilatation/core/scale.hpp"
#include "dilatation/models/conical.hpp"

namespace dilatation {

/// A coordinate chart psi of R^n fixing the origin, with its inverse.
struct Chart {
  std::string name;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> forward;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> inverse;
  double validity_radius = 0.5;
};

namespace detail {
/// Real root of t + t^3 = s. Cardano gives a start accurate in absolute
/// terms; Newton steps restore relative accuracy for small s.
inline double cubic_chart_inverse(double s) {
  const double r = std::sqrt(0.25 * s * s + 1.0 / 27.0);
  double t = std::cbrt(0.5 * s + r) - std::cbrt(r - 0.5 * s);
  for (int i = 0; i < 3; ++i) t -= (t + t * t * t - s) / (1.0 + 3.0 * t * t);
  return t;
}
}  // namespace detail

/// psi(t) = t + t^3 componentwise, bi-Lipschitz on the ball of radius 1/2.
inline Chart cubic_chart() {
  return Chart{"cubic",
               [](const Eigen::VectorXd& a) { return Eigen::VectorXd(a.array() + a.array().cube()); },
               [](const Eigen::VectorXd& s) {
                 Eigen::VectorXd t(s.size());
                 for (Eigen::Index i = 0; i < s.size(); ++i) t[i] = detail::cubic_chart_inverse(s[i]);
                 return t;
               },
               0.5};
}

inline Chart identity_chart() {
  return Chart{"identity", [](const Eigen::VectorXd& a) { return a; },
               [](const Eigen::VectorXd& a) { return a; }, 0.5};
}

/// Dilatations of a conical group transported through a chart family.
///
/// Around each x the chart Phi_x(y) = psi(x^-1 y) sends x to the neutral
/// element, and delta^x_eps = Phi_x^-1 delta_eps Phi_x. The distance is the
/// one of the base group. A single global chart would conjugate the whole
/// structure and stay linear; moving the chart with x is what makes
/// delta^x_eps delta^y_mu differ from delta^{delta^x_eps y}_mu delta^x_eps at
/// finite scale while every limit axiom still holds.
template <ConicalGroup G>
  requires std::same_as<typename G::element_type, Eigen::VectorXd> &&
           std::same_as<typename G::scale_type, PositiveReal>
class PullbackStructure {
 public:
  using point_type = Eigen::VectorXd;
  using scale_type = PositiveReal;

  PullbackStructure(G base, Chart chart, DomainConstants domain = {})
      : base_(std::move(base)), chart_(std::move(chart)), domain_(domain) {
    if (!chart_.forward || !chart_.inverse) throw ModelError("pullback: chart is incomplete");
    if (!(domain_.codomain_radius > domain_.domain_radius) || !(domain_.domain_radius > 1.0)) {
      throw ModelError("pullback: need B > A > 1");
    }
  }

  const G& base() const { return base_; }
  const Chart& chart() const { return chart_; }

  /// Phi_x(y) = psi(x^-1 y).
  point_type chart_at(const point_type& x, const point_type& y) const {
    return chart_.forward(base_.product(base_.inverse(x), y));
  }
  point_type chart_at_inverse(const point_type& x, const point_type& a) const {
    return base_.product(x, chart_.inverse(a));
  }

  point_type dilate(const point_type& x, const scale_type& eps, const point_type& y) const {
    return check(chart_at_inverse(x, base_.dilate(eps, chart_at(x, y))));
  }

  double distance(const point_type& a, const point_type& b) const {
    return base_.norm(base_.product(base_.inverse(a), b));
  }

  double point_gap(const point_type& a, const point_type& b) const {
    return (a - b).lpNorm<Eigen::Infinity>();
  }

  double domain_radius() const { return domain_.domain_radius; }
  double codomain_radius() const { return domain_.codomain_radius; }
  double closeness_budget() const { return domain_.closeness_budget; }
  double chart_radius() const { return chart_.validity_radius; }

  point_type sample_near(const point_type& c, double r, Rng& rng) const {
    return base_.product(c, base_.sample(rng, r));
  }
  std::vector<point_type> lattice_near(const point_type& c, double r) const
    requires requires(const G& g) { g.lattice(1.0); }
  {
    std::vector<point_type> out;
    for (const auto& a : base_.lattice(r)) out.push_back(base_.product(c, a));
    return out;
  }

  std::string name() const { return "pullback(base=" + base_.name() + ",chart=" + chart_.name + ")"; }
  std::string format_point(const point_type& p) const { return base_.format(p); }

  // In the chart at x the tangent group is the base group itself.
  point_type tangent_sum(const point_type& x, const point_type& u, const point_type& v) const {
    return chart_at_inverse(x, base_.product(chart_at(x, u), chart_at(x, v)));
  }
  point_type tangent_difference(const point_type& x, const point_type& u,
                                const point_type& v) const {
    return chart_at_inverse(x, base_.product(base_.inverse(chart_at(x, u)), chart_at(x, v)));
  }
  point_type tangent_inverse(const point_type& x, const point_type& u) const {
    return chart_at_inverse(x, base_.inverse(chart_at(x, u)));
  }
  double tangent_distance(const point_type& x, const point_type& u, const point_type& v) const {
    return base_.norm(base_.product(base_.inverse(chart_at(x, u)), chart_at(x, v)));
  }

 private:
  static point_type check(point_type p) {
    if (!p.allFinite()) throw DomainViolation("pullback dilatation left the chart");
    return p;
  }

  G base_;
  Chart chart_;
  DomainConstants domain_;
};

template <ConicalGroup G>
PullbackStructure<G> make_pullback(G base, Chart chart) {
  return PullbackStructure<G>(std::move(base), std::move(chart));
}

}  // namespace dilatation
