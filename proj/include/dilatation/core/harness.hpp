#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dilatation/core/config.hpp"
#include "dilatation/core/errors.hpp"
#include "dilatation/core/operators.hpp"
#include "dilatation/core/parallel.hpp"
#include "dilatation/core/report.hpp"
#include "dilatation/core/structure.hpp"

namespace dilatation {

enum class Axiom { A1, A2, A3, A4, Axiom0, ConeProperty };

inline std::string to_string(Axiom a) {
  switch (a) {
    case Axiom::A1: return "A1";
    case Axiom::A2: return "A2";
    case Axiom::A3: return "A3";
    case Axiom::A4: return "A4";
    case Axiom::Axiom0: return "Axiom0";
    case Axiom::ConeProperty: return "ConeProperty";
  }
  return "?";
}

inline Axiom axiom_from_string(const std::string& s) {
  for (Axiom a : {Axiom::A1, Axiom::A2, Axiom::A3, Axiom::A4, Axiom::Axiom0, Axiom::ConeProperty}) {
    if (to_string(a) == s) return a;
  }
  throw ConfigError("unknown axiom '" + s + "'");
}

/// Axioms stated as exact identities. The others are limits in eps.
inline bool is_exact_axiom(Axiom a) {
  return a == Axiom::A1 || a == Axiom::Axiom0 || a == Axiom::ConeProperty;
}

/// Scale range used when a caller does not choose one. Limit axioms sweep
/// 2^-2..2^-12. A3 and the cone property compare d(delta u, delta v) / nu
/// against a fixed value; in binary64 that ratio loses about nu^-step of its
/// relative accuracy on step-2 and step-3 groups, so they sweep 2^-1..2^-5.
inline GridSpec default_grid(Axiom a) {
  if (a == Axiom::A3 || a == Axiom::ConeProperty) return {1, 5};
  return {2, 12};
}

template <class P>
struct Region {
  P center;
  double radius = 1.0;
};

/// Models that can list deterministic points around a center.
template <class M>
concept HasLattice = DilatationStructure<M> && requires(const M& m, const point_t<M>& p) {
  { m.lattice_near(p, 1.0) } -> std::same_as<std::vector<point_t<M>>>;
};

/// One sampled configuration: a base x, a far point y in B(x, A) (or in the
/// chart ball for chart models) and two near points u, v within the
/// closeness budget of x.
template <class P>
struct SampleTuple {
  P x, y, u, v;
  std::uint64_t seed = 0;  // private stream for per-tuple randomness
};

/// Seeded random tuples followed by lattice tuples when the model has a
/// lattice. The list depends only on (model, region, count, seed).
template <DilatationStructure M>
std::vector<SampleTuple<point_t<M>>> sample_tuples(const M& s, const Region<point_t<M>>& region,
                                                   std::size_t count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample_tuples: sample_count must be >= 1");
  Rng rng(seed);
  double far = 0.999 * s.domain_radius();
  if constexpr (requires { { s.chart_radius() } -> std::convertible_to<double>; }) {
    far = std::min(far, s.chart_radius());
  }
  const double near = s.closeness_budget();
  std::vector<SampleTuple<point_t<M>>> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto x = s.sample_near(region.center, region.radius, rng);
    auto y = s.sample_near(x, far, rng);
    auto u = s.sample_near(x, near, rng);
    auto v = s.sample_near(x, near, rng);
    out.push_back({std::move(x), std::move(y), std::move(u), std::move(v), rng()});
  }
  if constexpr (HasLattice<M>) {
    std::vector<point_t<M>> bases{region.center};
    for (auto& p : s.lattice_near(region.center, region.radius)) bases.push_back(std::move(p));
    for (const auto& x : bases) {
      const auto ring = s.lattice_near(x, near);
      const auto far_ring = s.lattice_near(x, far);
      for (std::size_t i = 0; i < ring.size(); ++i) {
        // Pairs (x, e_i) expose degenerate directions; pairs of neighbours
        // exercise generic positions.
        out.push_back({x, far_ring[i % far_ring.size()], x, ring[i], rng()});
        out.push_back({x, far_ring[i % far_ring.size()], ring[i], ring[(i + 1) % ring.size()], rng()});
      }
    }
  }
  return out;
}

namespace detail {

template <DilatationStructure M>
double gap(const M& s, const point_t<M>& a, const point_t<M>& b) {
  if constexpr (requires { { s.point_gap(a, b) } -> std::convertible_to<double>; }) {
    return s.point_gap(a, b);
  } else {
    return s.distance(a, b);
  }
}

template <DilatationStructure M>
scale_t<M> reference_scale(const std::vector<scale_t<M>>& grid) {
  return scale_t<M>::from_nu(grid.back().nu() / 64.0);
}

template <DilatationStructure M>
double tangent_distance_ref(const M& s, const point_t<M>& x, const point_t<M>& u,
                            const point_t<M>& v, const scale_t<M>& ref) {
  if constexpr (ExactTangent<M>) {
    return s.tangent_distance(x, u, v);
  } else {
    return rescaled_distance(s, x, ref, u, v);
  }
}

template <DilatationStructure M>
point_t<M> tangent_difference_ref(const M& s, const point_t<M>& x, const point_t<M>& u,
                                  const point_t<M>& v, const scale_t<M>& ref) {
  if constexpr (ExactTangent<M>) {
    return s.tangent_difference(x, u, v);
  } else {
    return approx_difference(s, x, ref, u, v);
  }
}

template <DilatationStructure M>
double axiom_residual(const M& s, Axiom which, const SampleTuple<point_t<M>>& t,
                      const scale_t<M>& eps, const scale_t<M>& coarse, const scale_t<M>& ref) {
  const auto& [x, y, u, v, seed] = t;
  switch (which) {
    case Axiom::A1: {
      // Composition is checked with one expanding factor at most, the coarse
      // one: expanding by 1/nu(eps) would amplify roundoff rather than test
      // the action.
      const double unit = 1.0 + s.distance(x, y);
      double r = gap(s, s.dilate(x, scale_t<M>::identity(), y), y);
      r = std::max(r, gap(s, s.dilate(x, eps, x), x));
      r = std::max(r, gap(s, s.dilate(x, eps, s.dilate(x, coarse, y)), s.dilate(x, eps * coarse, y)));
      r = std::max(r, gap(s, s.dilate(x, coarse.inverse(), s.dilate(x, eps * coarse, y)), s.dilate(x, eps, y)));
      return r / unit;
    }
    case Axiom::A2:
      return gap(s, x, s.dilate(x, eps, y));
    case Axiom::A3: {
      double r = 0.0;
      for (const auto& [a, b] : {std::pair{u, v}, std::pair{y, u}}) {
        r = std::max(r, std::abs(rescaled_distance(s, x, eps, a, b) - tangent_distance_ref(s, x, a, b, ref)));
      }
      return r;
    }
    case Axiom::A4:
      return gap(s, approx_difference(s, x, eps, u, v), tangent_difference_ref(s, x, u, v, ref));
    case Axiom::Axiom0: {
      // B(x, nu(eps)) must sit inside delta^x_eps B(x, A): pull a point of
      // the small ball back and measure how far it lands beyond A.
      Rng rng(seed);
      const auto w = s.sample_near(x, eps.nu(), rng);
      const double back = s.distance(x, s.dilate(x, eps.inverse(), w));
      const double img = s.distance(x, s.dilate(x, eps, y));
      return std::max({0.0, back - s.domain_radius(), img - s.codomain_radius()});
    }
    case Axiom::ConeProperty: {
      const double lhs = tangent_distance_ref(s, x, u, v, ref);
      const double rhs = tangent_distance_ref(s, x, s.dilate(x, eps, u), s.dilate(x, eps, v), ref) / eps.nu();
      return std::abs(lhs - rhs);
    }
  }
  return 0.0;
}

}  // namespace detail

/// Sweeps one axiom over the grid. Each defect is the largest residual over
/// the sampled tuples, evaluated in parallel with an order-independent max.
/// Point identities and point limits (A1, A2, A4) are measured with the
/// model's point_gap; A3, Axiom0 and the cone property concern d itself.
///
/// Exact axioms (A1, Axiom0, ConeProperty) pass when every defect is within
/// tol.identity. Limit axioms (A2, A3, A4) pass when the defects are
/// non-increasing within tol.jitter and the final defect is at most
/// max(tol.identity, tol.limit_decrease * initial). The limits in A3, A4 and
/// the cone property come from the model's exact tangent operations when it
/// has them, and from a scale 64 times finer than the grid otherwise.
template <DilatationStructure M>
ConvergenceReport verify_axiom(const M& s, Axiom which, const Region<point_t<M>>& region,
                               const std::vector<scale_t<M>>& grid, std::size_t sample_count,
                               std::uint64_t seed, const Tolerances& tol = {}) {
  if (grid.empty()) throw std::invalid_argument("verify_axiom: empty grid");
  if (!strictly_decreasing_nu(grid)) throw std::invalid_argument("verify_axiom: grid must decrease in nu");
  const auto tuples = sample_tuples(s, region, sample_count, seed);
  const auto ref = detail::reference_scale<M>(grid);
  const auto coarse = grid.front();

  ConvergenceReport report;
  report.label = to_string(which);
  report.model = s.name();
  report.samples = tuples.size();
  report.seed = seed;
  for (const auto& eps : grid) {
    report.nu.push_back(eps.nu());
    report.defect.push_back(parallel_max(tuples.size(), [&](std::size_t i) {
      return detail::axiom_residual(s, which, tuples[i], eps, coarse, ref);
    }));
  }
  report.fitted_rate = fit_log_log_slope(report.nu, report.defect, tol.noise);

  if (is_exact_axiom(which)) {
    report.tolerance = tol.identity;
    report.verdict = report.max_defect() <= tol.identity;
  } else {
    report.tolerance = std::max(tol.identity, tol.limit_decrease * report.initial_defect());
    // Residuals within the identity tolerance are indistinguishable from zero.
    report.verdict = non_increasing_within(report.defect, tol.jitter, std::max(tol.noise, tol.identity)) &&
                     report.final_defect() <= report.tolerance;
  }

  if (which == Axiom::A3) {
    // d^x(u, v) = 0 with u != v makes the structure degenerate. A ratio
    // d^x / d below 1e-4 at the reference scale is read as zero.
    for (const auto& t : tuples) {
      for (const auto& [a, b] : {std::pair{t.u, t.v}, std::pair{t.y, t.u}}) {
        const double d = s.distance(a, b);
        if (d <= tol.identity) continue;
        if (detail::tangent_distance_ref(s, t.x, a, b, ref) <= 1e-4 * d) report.degenerate = true;
      }
    }
  }
  report.notes["kind"] = is_exact_axiom(which) ? "exact" : "limit";
  return report;
}

}  // namespace dilatation
