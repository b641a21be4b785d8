#pragma once

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dilatation/core/config.hpp"
#include "dilatation/core/errors.hpp"
#include "dilatation/core/format.hpp"
#include "dilatation/core/harness.hpp"
#include "dilatation/core/report.hpp"
#include "dilatation/core/structure.hpp"

namespace dilatation {

/// Estimates Q^x(u) = lim delta^{f(x)}_{eps^-1} f(delta^x_eps u) along the
/// grid, with the same Cauchy test as tangent_limit.
///
/// The estimate is the finest grid value, so the residual
/// (1/nu(eps)) gap(f(delta^x_eps u), delta^{f(x)}_eps Q) is read at the
/// second-finest scale; at the finest one it vanishes by construction. The
/// verdict is residual < tol.differentiability. Failure of the Cauchy test
/// means f is not differentiable at x along u and raises NonConvergent.
template <DilatationStructure Src, DilatationStructure Dst>
  requires std::same_as<scale_t<Src>, scale_t<Dst>>
std::pair<point_t<Dst>, ConvergenceReport> pansu_derivative(
    const Src& src, const Dst& dst, const std::function<point_t<Dst>(const point_t<Src>&)>& f,
    const point_t<Src>& x, const point_t<Src>& u, const std::vector<scale_t<Src>>& grid,
    const Tolerances& tol = {}) {
  if (grid.size() < 3 || !strictly_decreasing_nu(grid)) {
    throw std::invalid_argument("pansu_derivative: need a strictly decreasing grid of 3+ scales");
  }
  const auto fx = f(x);
  std::vector<point_t<Dst>> values;
  for (const auto& eps : grid) values.push_back(dst.dilate(fx, eps.inverse(), f(src.dilate(x, eps, u))));

  std::vector<double> gaps;
  for (std::size_t i = 1; i < values.size(); ++i) gaps.push_back(detail::gap(dst, values[i], values[i - 1]));
  for (std::size_t i = 1; i < gaps.size(); ++i) {
    if (gaps[i] > tol.identity && gaps[i] * tol.cauchy_shrink > gaps[i - 1]) {
      throw NonConvergent("pansu_derivative: f is not differentiable along u at this point");
    }
  }
  const auto& q = values.back();

  ConvergenceReport r;
  r.label = "pansu";
  r.model = dst.name();
  r.samples = 1;
  for (const auto& eps : grid) {
    r.nu.push_back(eps.nu());
    r.defect.push_back(detail::gap(dst, f(src.dilate(x, eps, u)), dst.dilate(fx, eps, q)) / eps.nu());
  }
  const double residual = r.defect[r.defect.size() - 2];
  r.fitted_rate = fit_log_log_slope(r.nu, r.defect, tol.noise);
  r.tolerance = tol.differentiability;
  r.verdict = residual < tol.differentiability;
  r.notes["residual"] = format_double(residual);
  return {q, r};
}

}  // namespace dilatation
