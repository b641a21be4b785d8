#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "dilatation/core/format.hpp"
#include "dilatation/core/operators.hpp"
#include "dilatation/core/structure.hpp"

namespace dilatation {

/// The structure seen through delta^x_mu: dilatations
/// delta-hat^{x,u}_{mu,eps} v = delta^x_{mu^-1} delta^{delta^x_mu u}_eps delta^x_mu v
/// and distance (delta^x, mu)(u, v) = d(delta^x_mu u, delta^x_mu v) / nu(mu).
template <DilatationStructure M>
class InducedStructure {
 public:
  using point_type = point_t<M>;
  using scale_type = scale_t<M>;

  InducedStructure(M base, point_type x, scale_type mu)
      : base_(std::move(base)), x_(std::move(x)), mu_(mu) {
    if (!(mu_.nu() > 0.0 && mu_.nu() < 1.0)) {
      throw std::invalid_argument("induced_structure: nu(mu) must lie in (0, 1)");
    }
  }

  const M& base() const { return base_; }
  const point_type& base_point() const { return x_; }
  const scale_type& mu() const { return mu_; }

  point_type dilate(const point_type& u, const scale_type& eps, const point_type& v) const {
    return base_.dilate(x_, mu_.inverse(),
                        base_.dilate(base_.dilate(x_, mu_, u), eps, base_.dilate(x_, mu_, v)));
  }

  double distance(const point_type& a, const point_type& b) const {
    return rescaled_distance(base_, x_, mu_, a, b);
  }

  double point_gap(const point_type& a, const point_type& b) const
    requires requires(const M& m) { m.point_gap(a, b); }
  {
    return base_.point_gap(a, b);
  }

  double domain_radius() const { return base_.domain_radius(); }
  double codomain_radius() const { return base_.codomain_radius(); }
  double closeness_budget() const { return base_.closeness_budget(); }

  /// Base samples, halving the radius until the induced distance is below r.
  point_type sample_near(const point_type& c, double r, Rng& rng) const {
    double radius = r;
    for (int attempt = 0; attempt < 60; ++attempt) {
      auto p = base_.sample_near(c, radius, rng);
      if (distance(c, p) < r) return p;
      radius *= 0.5;
    }
    return c;
  }

  std::string name() const {
    return "induced(" + base_.name() + ",mu=" + format_double(mu_.nu()) + ")";
  }
  std::string format_point(const point_type& p) const { return base_.format_point(p); }

  // delta^x_mu conjugates the induced dilatations at y into the base ones at
  // delta^x_mu y, so the tangent operations are the base ones conjugated
  // the same way and the tangent distance picks up the factor 1/nu(mu).
  point_type tangent_sum(const point_type& y, const point_type& u, const point_type& v) const
    requires ExactTangent<M>
  {
    return pull(base_.tangent_sum(push(y), push(u), push(v)));
  }
  point_type tangent_difference(const point_type& y, const point_type& u, const point_type& v) const
    requires ExactTangent<M>
  {
    return pull(base_.tangent_difference(push(y), push(u), push(v)));
  }
  point_type tangent_inverse(const point_type& y, const point_type& u) const
    requires ExactTangent<M>
  {
    return pull(base_.tangent_inverse(push(y), push(u)));
  }
  double tangent_distance(const point_type& y, const point_type& u, const point_type& v) const
    requires ExactTangent<M>
  {
    return base_.tangent_distance(push(y), push(u), push(v)) / mu_.nu();
  }

  /// |(delta^x, mu)(Sigma^x_mu(u, v), Sigma^x_mu(u, w)) - (delta^{delta^x_mu u}, mu)(v, w)|:
  /// how far Sigma^x_mu(u, .) is from an isometry between the two distances.
  double isometry_defect(const point_type& u, const point_type& v, const point_type& w) const {
    const double lhs = distance(approx_sum(base_, x_, mu_, u, v), approx_sum(base_, x_, mu_, u, w));
    const double rhs = rescaled_distance(base_, base_.dilate(x_, mu_, u), mu_, v, w);
    return std::abs(lhs - rhs);
  }

 private:
  point_type push(const point_type& p) const { return base_.dilate(x_, mu_, p); }
  point_type pull(const point_type& p) const { return base_.dilate(x_, mu_.inverse(), p); }

  M base_;
  point_type x_;
  scale_type mu_;
};

template <DilatationStructure M>
InducedStructure<M> induced_structure(const M& s, const point_t<M>& x, const scale_t<M>& mu) {
  return InducedStructure<M>(s, x, mu);
}

}  // namespace dilatation
