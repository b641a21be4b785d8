#pragma once

#include "dilatation/affine/menelaos.hpp"
#include "dilatation/core/structure.hpp"

namespace dilatation {

struct DistanceEstimates {
  double lhs_x = 0.0, rhs_x = 0.0;  // d(x, w) <= nu(eps) / (1 - nu(eps mu)) d(x, delta^y_mu x)
  double lhs_y = 0.0, rhs_y = 0.0;  // d(y, w) <= 1 / (1 - nu(eps mu)) d(y, delta^x_eps y)
  bool holds = false;
};

template <DilatationStructure M>
DistanceEstimates distance_estimates_check(const M& s, const point_t<M>& x, const point_t<M>& y,
                                           const scale_t<M>& eps, const scale_t<M>& mu,
                                           double slack = 1.0 + 1e-9) {
  // The estimates can be equalities, so w is iterated well past the usual
  // fixed-point tolerance.
  MenelaosOptions opt;
  opt.tol = 1e-15;
  const auto w = menelaos_iterate(s, x, eps, y, mu, opt).w;
  const double c = 1.0 / (1.0 - (eps * mu).nu());
  DistanceEstimates e;
  e.lhs_x = s.distance(x, w);
  e.rhs_x = eps.nu() * c * s.distance(x, s.dilate(y, mu, x));
  e.lhs_y = s.distance(y, w);
  e.rhs_y = c * s.distance(y, s.dilate(x, eps, y));
  e.holds = e.lhs_x <= slack * e.rhs_x && e.lhs_y <= slack * e.rhs_y;
  return e;
}

}  // namespace dilatation
