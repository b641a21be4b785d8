#pragma once

#include <concepts>
#include <random>
#include <string>

#include "dilatation/core/scale.hpp"

namespace dilatation {

using Rng = std::mt19937_64;

/// A metric space with a field of dilatations.
///
/// `dilate(x, eps, y)` is delta^x_eps y. Models throw DomainViolation when an
/// argument lies outside the domain of the dilatation. `sample_near(c, r, rng)`
/// returns a point q with d(c, q) < r and is the only source of randomness the
/// harness uses.
template <class M>
concept DilatationStructure =
    std::copy_constructible<M> &&
    requires(const M& m, const typename M::point_type& p, const typename M::scale_type& e,
             double r, Rng& rng) {
      typename M::point_type;
      typename M::scale_type;
      requires ScaleGroup<typename M::scale_type>;
      { m.distance(p, p) } -> std::convertible_to<double>;
      { m.dilate(p, e, p) } -> std::same_as<typename M::point_type>;
      { m.domain_radius() } -> std::convertible_to<double>;
      { m.codomain_radius() } -> std::convertible_to<double>;
      { m.closeness_budget() } -> std::convertible_to<double>;
      { m.sample_near(p, r, rng) } -> std::same_as<typename M::point_type>;
      { m.name() } -> std::convertible_to<std::string>;
      { m.format_point(p) } -> std::convertible_to<std::string>;
    };

/// Structures that know their tangent operations in closed form.
///
/// Conical groups and the chart-family pullback provide these; the numeric
/// limit path is kept alongside for cross-validation.
template <class M>
concept ExactTangent =
    DilatationStructure<M> && requires(const M& m, const typename M::point_type& p) {
      { m.tangent_sum(p, p, p) } -> std::same_as<typename M::point_type>;
      { m.tangent_difference(p, p, p) } -> std::same_as<typename M::point_type>;
      { m.tangent_inverse(p, p) } -> std::same_as<typename M::point_type>;
      { m.tangent_distance(p, p, p) } -> std::convertible_to<double>;
    };

template <DilatationStructure M>
using point_t = typename M::point_type;

template <DilatationStructure M>
using scale_t = typename M::scale_type;

}  // namespace dilatation
