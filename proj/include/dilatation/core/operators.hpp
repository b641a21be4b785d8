#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "dilatation/core/config.hpp"
#include "dilatation/core/errors.hpp"
#include "dilatation/core/report.hpp"
#include "dilatation/core/structure.hpp"

namespace dilatation {

namespace detail {
template <ScaleGroup S>
void require_contracting(const S& eps, const char* who) {
  if (!(eps.nu() <= 1.0)) {
    throw std::invalid_argument(std::string(who) + ": scale must satisfy nu(eps) <= 1");
  }
}
}  // namespace detail

/// Delta^x_eps(u, v) = delta^{delta^x_eps u}_{eps^-1} delta^x_eps v.
template <DilatationStructure M>
point_t<M> approx_difference(const M& s, const point_t<M>& x, const scale_t<M>& eps,
                             const point_t<M>& u, const point_t<M>& v) {
  detail::require_contracting(eps, "approx_difference");
  const auto base = s.dilate(x, eps, u);
  return s.dilate(base, eps.inverse(), s.dilate(x, eps, v));
}

/// Sigma^x_eps(u, v) = delta^x_{eps^-1} delta^{delta^x_eps u}_eps v.
template <DilatationStructure M>
point_t<M> approx_sum(const M& s, const point_t<M>& x, const scale_t<M>& eps,
                      const point_t<M>& u, const point_t<M>& v) {
  detail::require_contracting(eps, "approx_sum");
  const auto base = s.dilate(x, eps, u);
  return s.dilate(x, eps.inverse(), s.dilate(base, eps, v));
}

/// inv^x_eps(u) = delta^{delta^x_eps u}_{eps^-1} x.
template <DilatationStructure M>
point_t<M> approx_inverse(const M& s, const point_t<M>& x, const scale_t<M>& eps,
                          const point_t<M>& u) {
  detail::require_contracting(eps, "approx_inverse");
  return s.dilate(s.dilate(x, eps, u), eps.inverse(), x);
}

/// (delta^x, mu)(u, v) = d(delta^x_mu u, delta^x_mu v) / nu(mu).
template <DilatationStructure M>
double rescaled_distance(const M& s, const point_t<M>& x, const scale_t<M>& mu,
                         const point_t<M>& u, const point_t<M>& v) {
  const double n = mu.nu();
  if (!(n > 0.0 && n <= 1.0)) {
    throw std::invalid_argument("rescaled_distance: nu(mu) must lie in (0, 1]");
  }
  return s.distance(s.dilate(x, mu, u), s.dilate(x, mu, v)) / n;
}

/// Estimates d^x(u, v) as the limit of rescaled distances along `grid`.
///
/// The estimate is the value at the finest grid point. Successive gaps must
/// not grow by more than the jitter factor, otherwise NonConvergent is thrown.
/// The report's defect list holds |r_k - r_final|; `degenerate` is set when
/// the rescaled distances vanish in the limit although u != v.
template <DilatationStructure M>
std::pair<double, ConvergenceReport> estimate_dx(const M& s, const point_t<M>& x,
                                                 const point_t<M>& u, const point_t<M>& v,
                                                 const std::vector<scale_t<M>>& grid,
                                                 const Tolerances& tol = {}) {
  if (grid.size() < 4) {
    throw std::invalid_argument("estimate_dx: grid needs at least 4 points");
  }
  if (!strictly_decreasing_nu(grid)) {
    throw std::invalid_argument("estimate_dx: grid must be strictly decreasing in nu");
  }
  std::vector<double> values;
  values.reserve(grid.size());
  for (const auto& eps : grid) values.push_back(rescaled_distance(s, x, eps, u, v));

  ConvergenceReport report;
  report.label = "dx";
  report.model = s.name();
  report.samples = 1;
  for (const auto& eps : grid) report.nu.push_back(eps.nu());

  std::vector<double> gaps;
  for (std::size_t i = 1; i < values.size(); ++i) gaps.push_back(std::abs(values[i] - values[i - 1]));
  const double scale = 1.0 + std::abs(values.back());
  if (!non_increasing_within(gaps, tol.jitter, tol.noise * scale)) {
    throw NonConvergent("rescaled distances do not settle on " + s.name());
  }
  const double limit = values.back();
  for (double r : values) report.defect.push_back(std::abs(r - limit));
  report.fitted_rate = fit_log_log_slope(report.nu, gaps, tol.noise * scale);
  report.verdict = true;
  report.tolerance = tol.noise * scale;
  // A rescaled distance that keeps shrinking like a power of nu is heading to
  // zero: d^x(u, v) = 0 while u != v marks a degenerate structure.
  const double decay = fit_log_log_slope(report.nu, values, 0.0);
  const bool vanishing = limit <= tol.noise || (std::isfinite(decay) && decay >= 0.5);
  report.degenerate = vanishing && s.distance(u, v) > tol.identity;
  report.notes["decay_slope"] = std::to_string(decay);
  return {limit, report};
}

}  // namespace dilatation
