#pragma once

#include <stdexcept>
#include <vector>

#include "dilatation/core/scale.hpp"
#include "dilatation/core/structure.hpp"
#include "dilatation/emergent/tangent.hpp"

namespace dilatation {

/// d(delta^x_eps y, delta^y_{1-eps} x). Zero for all x, y, eps exactly when
/// the structure is barycentric.
template <DilatationStructure M>
  requires std::same_as<scale_t<M>, PositiveReal>
double barycentric_defect(const M& s, const point_t<M>& x, const point_t<M>& y, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("barycentric_defect: eps must lie in (0, 1)");
  return s.distance(s.dilate(x, PositiveReal(eps), y), s.dilate(y, PositiveReal(1.0 - eps), x));
}

/// d(inv^u(v), u) + d(u, delta^u_eps v) - d(inv^u(v), delta^u_eps v): zero
/// when inv^u(v), u and delta^u_eps v lie on a geodesic in that order.
template <DilatationStructure M>
double collinearity_defect(const M& s, const point_t<M>& u, const point_t<M>& v, const scale_t<M>& eps,
                           const std::vector<scale_t<M>>& grid = dyadic_grid<scale_t<M>>(2, 12)) {
  const auto inv = [&] {
    if constexpr (ExactTangent<M>) {
      return s.tangent_inverse(u, v);
    } else {
      return tangent_limit(s, u, v, v, TangentOp::Inverse, grid).first;
    }
  }();
  const auto dv = s.dilate(u, eps, v);
  return s.distance(inv, u) + s.distance(u, dv) - s.distance(inv, dv);
}

}  // namespace dilatation
