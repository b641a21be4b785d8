#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dilatation/core/config.hpp"
#include "dilatation/core/harness.hpp"
#include "dilatation/core/parallel.hpp"
#include "dilatation/core/report.hpp"
#include "dilatation/core/structure.hpp"

namespace dilatation {

/// Lin(x, y, z; eps, mu) = d(delta^x_eps delta^y_mu z, delta^{delta^x_eps y}_mu delta^x_eps z).
template <DilatationStructure M>
double lin_defect(const M& s, const point_t<M>& x, const point_t<M>& y, const point_t<M>& z,
                  const scale_t<M>& eps, const scale_t<M>& mu) {
  const auto lhs = s.dilate(x, eps, s.dilate(y, mu, z));
  const auto rhs = s.dilate(s.dilate(x, eps, y), mu, s.dilate(x, eps, z));
  return s.distance(lhs, rhs);
}

/// The same two points as lin_defect compared with the model's point gap.
/// On root-type norms d turns roundoff of 1e-16 into 1e-8, so identity
/// checks at the 1e-9 level use this instead.
template <DilatationStructure M>
double linearity_gap(const M& s, const point_t<M>& x, const point_t<M>& y, const point_t<M>& z,
                     const scale_t<M>& eps, const scale_t<M>& mu) {
  const auto lhs = s.dilate(x, eps, s.dilate(y, mu, z));
  const auto rhs = s.dilate(s.dilate(x, eps, y), mu, s.dilate(x, eps, z));
  return detail::gap(s, lhs, rhs);
}

namespace detail {

/// Shared verdict of the infinitesimal scans: values decrease along the grid
/// (points whose raw residual is within the identity tolerance count as zero)
/// and the final value is below limit_decrease times the initial one.
inline void scan_verdict(ConvergenceReport& r, const std::vector<bool>& zero, const Tolerances& tol) {
  bool all_zero = std::all_of(zero.begin(), zero.end(), [](bool b) { return b; });
  bool decreasing = true;
  for (std::size_t i = 1; i < r.defect.size(); ++i) {
    if (!zero[i] && !zero[i - 1] && r.defect[i] >= r.defect[i - 1]) decreasing = false;
    if (!zero[i] && zero[i - 1]) decreasing = false;
  }
  const double final_value = zero.back() ? 0.0 : r.defect.back();
  r.tolerance = tol.limit_decrease * r.initial_defect();
  r.verdict = all_zero || (decreasing && final_value < r.tolerance);
  r.fitted_rate = fit_log_log_slope(r.nu, r.defect, 0.0);
  r.notes["zero_points"] = std::to_string(std::count(zero.begin(), zero.end(), true));
}

}  // namespace detail

/// (1/nu(eps)^2) Lin(x, delta^x_eps y, z; eps, eps) over the grid. Tends to 0
/// on every strong dilatation structure; identically 0 on linear ones.
template <DilatationStructure M>
ConvergenceReport inflin_scan(const M& s, const point_t<M>& x, const point_t<M>& y,
                              const point_t<M>& z, const std::vector<scale_t<M>>& grid,
                              const Tolerances& tol = {}) {
  if (grid.size() < 2 || !strictly_decreasing_nu(grid)) {
    throw std::invalid_argument("inflin_scan: need a strictly decreasing grid of 2+ scales");
  }
  ConvergenceReport r;
  r.label = "inflin";
  r.model = s.name();
  r.samples = 1;
  std::vector<bool> zero;
  for (const auto& eps : grid) {
    const auto w = s.dilate(x, eps, y);
    const double n = eps.nu();
    r.nu.push_back(n);
    r.defect.push_back(lin_defect(s, x, w, z, eps, eps) / (n * n));
    zero.push_back(linearity_gap(s, x, w, z, eps, eps) <= tol.identity);
  }
  detail::scan_verdict(r, zero, tol);
  return r;
}

/// (1/nu(eps)) (delta^x, eps)(delta^w_eps v, delta-hat^{x,w}_{eps,eps} v) with
/// w = delta^x_eps y, written out as
/// d(delta^x_eps delta^w_eps v, delta^x_eps delta-hat v) / nu(eps)^2.
template <DilatationStructure M>
ConvergenceReport plin1_scan(const M& s, const point_t<M>& x, const point_t<M>& y,
                             const point_t<M>& v, const std::vector<scale_t<M>>& grid,
                             const Tolerances& tol = {}) {
  if (grid.size() < 2 || !strictly_decreasing_nu(grid)) {
    throw std::invalid_argument("plin1_scan: need a strictly decreasing grid of 2+ scales");
  }
  ConvergenceReport r;
  r.label = "plin1";
  r.model = s.name();
  r.samples = 1;
  std::vector<bool> zero;
  for (const auto& eps : grid) {
    const double n = eps.nu();
    const auto w = s.dilate(x, eps, y);
    const auto hat = s.dilate(x, eps.inverse(), s.dilate(s.dilate(x, eps, w), eps, s.dilate(x, eps, v)));
    const auto a = s.dilate(x, eps, s.dilate(w, eps, v));
    const auto b = s.dilate(x, eps, hat);
    r.nu.push_back(n);
    r.defect.push_back(s.distance(a, b) / (n * n));
    zero.push_back(detail::gap(s, a, b) <= tol.identity);
  }
  detail::scan_verdict(r, zero, tol);
  return r;
}

/// sup |d(u, v) - d^x(u, v)| / nu(eps) over seeded u, v with d(x, u), d(x, v)
/// below nu(eps). d^x is exact when the model provides it and taken at a
/// scale 64 times finer than the grid otherwise.
template <DilatationStructure M>
ConvergenceReport metric_tangent_scan(const M& s, const point_t<M>& x,
                                      const std::vector<scale_t<M>>& grid, std::size_t samples,
                                      std::uint64_t seed, const Tolerances& tol = {}) {
  if (grid.size() < 2 || !strictly_decreasing_nu(grid)) {
    throw std::invalid_argument("metric_tangent_scan: need a strictly decreasing grid of 2+ scales");
  }
  if (samples < 1) throw std::invalid_argument("metric_tangent_scan: samples must be >= 1");
  const auto ref = detail::reference_scale<M>(grid);
  ConvergenceReport r;
  r.label = "metric_tangent";
  r.model = s.name();
  r.samples = samples;
  r.seed = seed;
  for (const auto& eps : grid) {
    const double n = eps.nu();
    Rng rng(seed);
    std::vector<std::pair<point_t<M>, point_t<M>>> pairs;
    for (std::size_t i = 0; i < samples; ++i) {
      auto u = s.sample_near(x, n, rng);
      auto v = s.sample_near(x, n, rng);
      pairs.emplace_back(std::move(u), std::move(v));
    }
    r.nu.push_back(n);
    r.defect.push_back(parallel_max(pairs.size(), [&](std::size_t i) {
      const auto& [u, v] = pairs[i];
      return std::abs(s.distance(u, v) - detail::tangent_distance_ref(s, x, u, v, ref)) / n;
    }));
  }
  r.fitted_rate = fit_log_log_slope(r.nu, r.defect, tol.noise);
  r.tolerance = std::max(tol.identity, tol.limit_decrease * r.initial_defect());
  r.verdict = non_increasing_within(r.defect, 1.0, tol.identity) && r.final_defect() <= r.tolerance;
  return r;
}

}  // namespace dilatation
