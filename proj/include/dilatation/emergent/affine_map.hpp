#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <vector>

#include "dilatation/core/config.hpp"
#include "dilatation/core/format.hpp"
#include "dilatation/core/harness.hpp"
#include "dilatation/core/operators.hpp"
#include "dilatation/core/parallel.hpp"
#include "dilatation/core/report.hpp"
#include "dilatation/core/structure.hpp"

namespace dilatation {

template <DilatationStructure M>
using PointMap = std::function<point_t<M>(const point_t<M>&)>;

/// Largest failure of T to commute with dilatations,
/// T delta^x_eps u = delta^{Tx}_eps T u, and with the approximate sums,
/// T Sigma^x_eps(u, v) = Sigma^{Tx}_eps(Tu, Tv), one defect per scale.
/// The Lipschitz constant of T on the sampled points goes into the notes.
template <DilatationStructure M>
ConvergenceReport check_affine_map(const M& s, const PointMap<M>& t,
                                   const Region<point_t<M>>& region, std::size_t samples,
                                   std::uint64_t seed, const std::vector<scale_t<M>>& scales,
                                   const Tolerances& tol = {}) {
  const auto tuples = sample_tuples(s, region, samples, seed);
  ConvergenceReport r;
  r.label = "affine_map";
  r.model = s.name();
  r.samples = tuples.size();
  r.seed = seed;
  for (const auto& eps : scales) {
    r.nu.push_back(eps.nu());
    r.defect.push_back(parallel_max(tuples.size(), [&](std::size_t i) {
      const auto& [x, y, u, v, sd] = tuples[i];
      const auto tx = t(x);
      double worst = detail::gap(s, t(s.dilate(x, eps, y)), s.dilate(tx, eps, t(y)));
      worst = std::max(worst, detail::gap(s, t(s.dilate(x, eps, u)), s.dilate(tx, eps, t(u))));
      if (eps.nu() <= 1.0) {
        worst = std::max(worst, detail::gap(s, t(approx_sum(s, x, eps, u, v)),
                                            approx_sum(s, tx, eps, t(u), t(v))));
      }
      return worst;
    }));
  }
  double lipschitz = 0.0;
  for (const auto& tp : tuples) {
    for (const auto& [a, b] : {std::pair{tp.x, tp.y}, std::pair{tp.u, tp.v}}) {
      const double d = s.distance(a, b);
      if (d > tol.identity) lipschitz = std::max(lipschitz, s.distance(t(a), t(b)) / d);
    }
  }
  r.tolerance = tol.identity;
  r.verdict = r.max_defect() <= tol.identity;
  r.notes["lipschitz_estimate"] = format_double(lipschitz);
  return r;
}

}  // namespace dilatation
