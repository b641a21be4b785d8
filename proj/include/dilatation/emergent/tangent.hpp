#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dilatation/core/config.hpp"
#include "dilatation/core/errors.hpp"
#include "dilatation/core/harness.hpp"
#include "dilatation/core/operators.hpp"
#include "dilatation/core/report.hpp"
#include "dilatation/core/structure.hpp"

namespace dilatation {

enum class TangentOp { Sum, Difference, Inverse };

inline std::string to_string(TangentOp op) {
  switch (op) {
    case TangentOp::Sum: return "sum";
    case TangentOp::Difference: return "difference";
    case TangentOp::Inverse: return "inverse";
  }
  return "?";
}

namespace detail {

template <DilatationStructure M>
point_t<M> approx_op(const M& s, TangentOp op, const point_t<M>& x, const scale_t<M>& eps,
                     const point_t<M>& u, const point_t<M>& v) {
  switch (op) {
    case TangentOp::Sum: return approx_sum(s, x, eps, u, v);
    case TangentOp::Difference: return approx_difference(s, x, eps, u, v);
    case TangentOp::Inverse: return approx_inverse(s, x, eps, u);
  }
  throw std::invalid_argument("unknown tangent operation");
}

template <ExactTangent M>
point_t<M> exact_op(const M& s, TangentOp op, const point_t<M>& x, const point_t<M>& u,
                    const point_t<M>& v) {
  switch (op) {
    case TangentOp::Sum: return s.tangent_sum(x, u, v);
    case TangentOp::Difference: return s.tangent_difference(x, u, v);
    case TangentOp::Inverse: return s.tangent_inverse(x, u);
  }
  throw std::invalid_argument("unknown tangent operation");
}

}  // namespace detail

/// The limit of Sigma^x_eps, Delta^x_eps or inv^x_eps as nu(eps) -> 0.
///
/// Numerically the limit is the value at the finest grid point, accepted only
/// if every gap between successive values is at least `cauchy_shrink` times
/// smaller than the one before (gaps within the identity tolerance count as
/// zero). Structures with exact tangent operations return the exact value;
/// the grid values are still computed and the report's defects are their
/// gaps to it, so the two paths check each other. `v` is ignored for the
/// inverse.
template <DilatationStructure M>
std::pair<point_t<M>, ConvergenceReport> tangent_limit(const M& s, const point_t<M>& x,
                                                        const point_t<M>& u, const point_t<M>& v,
                                                        TangentOp op,
                                                        const std::vector<scale_t<M>>& grid,
                                                        const Tolerances& tol = {}) {
  if (grid.size() < 2) throw std::invalid_argument("tangent_limit: grid needs at least 2 points");
  if (!strictly_decreasing_nu(grid)) {
    throw std::invalid_argument("tangent_limit: grid must be strictly decreasing in nu");
  }
  std::vector<point_t<M>> values;
  values.reserve(grid.size());
  for (const auto& eps : grid) values.push_back(detail::approx_op(s, op, x, eps, u, v));

  ConvergenceReport report;
  report.label = "tangent_" + to_string(op);
  report.model = s.name();
  report.samples = 1;
  for (const auto& eps : grid) report.nu.push_back(eps.nu());

  if constexpr (ExactTangent<M>) {
    auto exact = detail::exact_op(s, op, x, u, v);
    for (const auto& p : values) report.defect.push_back(detail::gap(s, p, exact));
    report.fitted_rate = fit_log_log_slope(report.nu, report.defect, tol.identity);
    report.tolerance = std::max(tol.identity, tol.limit_decrease * report.initial_defect());
    report.verdict = non_increasing_within(report.defect, tol.jitter, tol.identity) &&
                     report.final_defect() <= report.tolerance;
    report.notes["limit"] = "exact";
    return {std::move(exact), report};
  } else {
    std::vector<double> gaps;
    for (std::size_t i = 1; i < values.size(); ++i) gaps.push_back(detail::gap(s, values[i], values[i - 1]));
    for (std::size_t i = 1; i < gaps.size(); ++i) {
      if (gaps[i] > tol.identity && gaps[i] * tol.cauchy_shrink > gaps[i - 1]) {
        throw NonConvergent("tangent " + to_string(op) + " on " + s.name() +
                            ": successive gaps do not shrink by " + std::to_string(tol.cauchy_shrink));
      }
    }
    for (const auto& p : values) report.defect.push_back(detail::gap(s, p, values.back()));
    report.fitted_rate = fit_log_log_slope(std::vector<double>(report.nu.begin() + 1, report.nu.end()), gaps,
                                           tol.identity);
    report.tolerance = gaps.back();
    report.verdict = true;
    report.notes["limit"] = "finest grid value";
    return {values.back(), report};
  }
}

/// The tangent space at x: the tangent operations, the tangent distance and
/// the tangent dilatations.
template <DilatationStructure M>
class TangentSpace {
 public:
  using point_type = point_t<M>;
  using scale_type = scale_t<M>;

  TangentSpace(M structure, point_type base, std::vector<scale_type> grid, Tolerances tol = {})
      : s_(std::move(structure)), x_(std::move(base)), grid_(std::move(grid)), tol_(tol) {}

  const M& structure() const { return s_; }
  const point_type& base() const { return x_; }

  point_type sum(const point_type& u, const point_type& v) const { return op(TangentOp::Sum, u, v); }
  point_type difference(const point_type& u, const point_type& v) const {
    return op(TangentOp::Difference, u, v);
  }
  point_type inverse(const point_type& u) const { return op(TangentOp::Inverse, u, u); }

  double distance(const point_type& u, const point_type& v) const {
    if constexpr (ExactTangent<M>) {
      return s_.tangent_distance(x_, u, v);
    } else {
      return estimate_dx(s_, x_, u, v, grid_, tol_).first;
    }
  }

  /// delta-bar^{x,u}_eps y = Sigma^x(u, delta^x_eps Delta^x(u, y)).
  point_type dilate(const point_type& u, const scale_type& eps, const point_type& y) const {
    return sum(u, s_.dilate(x_, eps, difference(u, y)));
  }

 private:
  point_type op(TangentOp which, const point_type& u, const point_type& v) const {
    if constexpr (ExactTangent<M>) {
      return detail::exact_op(s_, which, x_, u, v);
    } else {
      return tangent_limit(s_, x_, u, v, which, grid_, tol_).first;
    }
  }

  M s_;
  point_type x_;
  std::vector<scale_type> grid_;
  Tolerances tol_;
};

/// delta-bar^{x,u}_eps y on the tangent space T.
template <DilatationStructure M>
point_t<M> tangent_dilate(const TangentSpace<M>& t, const point_t<M>& u, const scale_t<M>& eps,
                          const point_t<M>& y) {
  return t.dilate(u, eps, y);
}

/// Largest residual of the local group laws of (Sigma^x, inv^x) over the
/// given triples: Sigma(x, u) = u, Sigma(u, x) = u, associativity and
/// Sigma(u, inv(u)) = x.
template <DilatationStructure M>
double tangent_group_law_defect(const TangentSpace<M>& t,
                                const std::vector<std::array<point_t<M>, 3>>& triples) {
  const auto& s = t.structure();
  const auto& x = t.base();
  double worst = 0.0;
  for (const auto& [u, v, w] : triples) {
    worst = std::max(worst, detail::gap(s, t.sum(x, u), u));
    worst = std::max(worst, detail::gap(s, t.sum(u, x), u));
    worst = std::max(worst, detail::gap(s, t.sum(t.sum(u, v), w), t.sum(u, t.sum(v, w))));
    worst = std::max(worst, detail::gap(s, t.sum(u, t.inverse(u)), x));
  }
  return worst;
}

}  // namespace dilatation
