#pragma once

#include <concepts>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dilatation/core/structure.hpp"

namespace dilatation {

/// A group with dilatations delta_eps acting as automorphisms, and a
/// homogeneous norm with ||delta_eps a|| = nu(eps) ||a||.
///
/// `sample(rng, r)` returns an element of norm strictly below r.
template <class G>
concept ConicalGroup =
    std::copy_constructible<G> &&
    requires(const G& g, const typename G::element_type& a, const typename G::scale_type& e,
             Rng& rng, double r) {
      typename G::element_type;
      typename G::scale_type;
      requires ScaleGroup<typename G::scale_type>;
      { g.identity() } -> std::same_as<typename G::element_type>;
      { g.product(a, a) } -> std::same_as<typename G::element_type>;
      { g.inverse(a) } -> std::same_as<typename G::element_type>;
      { g.dilate(e, a) } -> std::same_as<typename G::element_type>;
      { g.norm(a) } -> std::convertible_to<double>;
      { g.sample(rng, r) } -> std::same_as<typename G::element_type>;
      { g.name() } -> std::convertible_to<std::string>;
      { g.format(a) } -> std::convertible_to<std::string>;
    };

/// Domain constants shared by every model whose dilatations are globally
/// defined.
struct DomainConstants {
  double domain_radius = 2.0;     // A
  double codomain_radius = 4.0;   // B
  double closeness_budget = 0.2;  // 0.1 * A
};

/// The dilatation structure of a normed conical group:
/// delta^x_eps u = x delta_eps(x^-1 u), d(x, y) = ||x^-1 y||.
template <ConicalGroup G>
class ConicalStructure {
 public:
  using group_type = G;
  using point_type = typename G::element_type;
  using scale_type = typename G::scale_type;

  explicit ConicalStructure(G group, DomainConstants domain = {})
      : group_(std::move(group)), domain_(domain) {
    if (!(domain_.domain_radius > 1.0) || !(domain_.codomain_radius > domain_.domain_radius) ||
        !(domain_.closeness_budget > 0.0)) {
      throw std::invalid_argument("ConicalStructure: need B > A > 1 and a positive budget");
    }
  }

  const G& group() const { return group_; }

  point_type dilate(const point_type& x, const scale_type& eps, const point_type& u) const {
    return group_.product(x, group_.dilate(eps, group_.product(group_.inverse(x), u)));
  }

  double distance(const point_type& a, const point_type& b) const {
    return group_.norm(group_.product(group_.inverse(a), b));
  }

  /// Equality gauge for points: the largest coordinate difference when points
  /// are coordinate vectors, the distance otherwise. Exact identities and
  /// point limits are judged with it, since a root-type norm turns coordinate
  /// roundoff of size e into a distance of size e^(1/step).
  double point_gap(const point_type& a, const point_type& b) const {
    if constexpr (requires { (a - b).template lpNorm<Eigen::Infinity>(); }) {
      return (a - b).template lpNorm<Eigen::Infinity>();
    } else {
      return distance(a, b);
    }
  }

  double domain_radius() const { return domain_.domain_radius; }
  double codomain_radius() const { return domain_.codomain_radius; }
  double closeness_budget() const { return domain_.closeness_budget; }

  point_type sample_near(const point_type& c, double r, Rng& rng) const {
    return group_.product(c, group_.sample(rng, r));
  }

  std::vector<point_type> lattice_near(const point_type& c, double r) const
    requires requires(const G& g) { g.lattice(1.0); }
  {
    std::vector<point_type> out;
    for (const auto& a : group_.lattice(r)) out.push_back(group_.product(c, a));
    return out;
  }

  std::string name() const { return group_.name(); }
  std::string format_point(const point_type& p) const { return group_.format(p); }

  // Tangent operations of a conical group in closed form:
  // Sigma^x(u, v) = u x^-1 v, Delta^x(u, v) = x u^-1 v, inv^x(u) = x u^-1 x.
  point_type tangent_sum(const point_type& x, const point_type& u, const point_type& v) const {
    return group_.product(group_.product(u, group_.inverse(x)), v);
  }
  point_type tangent_difference(const point_type& x, const point_type& u,
                                const point_type& v) const {
    return group_.product(group_.product(x, group_.inverse(u)), v);
  }
  point_type tangent_inverse(const point_type& x, const point_type& u) const {
    return group_.product(group_.product(x, group_.inverse(u)), x);
  }
  double tangent_distance(const point_type&, const point_type& u, const point_type& v) const {
    return distance(u, v);
  }

  /// Left translation a -> w a, an isometry of d.
  std::function<point_type(const point_type&)> left_translation(const point_type& w) const {
    return [g = group_, w](const point_type& a) { return g.product(w, a); };
  }

  /// The group operation moved to neutral element u: x +_u v = x u^-1 v.
  point_type plus_at(const point_type& u, const point_type& x, const point_type& v) const {
    return group_.product(group_.product(x, group_.inverse(u)), v);
  }

  /// Inverse for +_u: inv^u(x) = u x^-1 u.
  point_type inverse_at(const point_type& u, const point_type& x) const {
    return group_.product(group_.product(u, group_.inverse(x)), u);
  }

 private:
  G group_;
  DomainConstants domain_;
};

}  // namespace dilatation
