#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "dilatation/affine/probes.hpp"
#include "dilatation/core/config.hpp"
#include "dilatation/core/errors.hpp"
#include "dilatation/core/harness.hpp"
#include "dilatation/core/structure.hpp"

namespace dilatation {

template <class P>
struct MenelaosResult {
  P w;
  std::size_t iterations = 0;
  double residual = 0.0;              // d(x_N, y_N)
  double rate = 0.0;                  // mean of the recorded step ratios
  std::vector<double> rates;          // d(x_{n+1}, y_{n+1}) / d(x_n, y_n)
  bool noise_limited = false;         // stopped on the noise floor, not on tol
  double probe_defect = 0.0;          // max gap(delta^x_eps delta^y_mu p, delta^w_{eps mu} p)
};

struct MenelaosOptions {
  double tol = 1e-12;
  std::size_t max_iter = 10000;
  // Step ratios are recorded only while d(x_n, y_n) exceeds this; below it
  // the ratio of two roundoff-dominated distances says nothing.
  double rate_floor = 1e-3;
  // A run whose gap stops shrinking below this has converged as far as
  // binary64 allows; above it, a stall is a failure.
  double noise_floor = 1e-9;
  std::size_t stall_steps = 5;
};

/// The fixed point w of delta^x_eps delta^y_mu, by the two-sequence
/// iteration x_{n+1} = delta^{delta^{x_n}_eps y_n}_mu x_n,
/// y_{n+1} = delta^{x_n}_eps y_n, whose gaps shrink by nu(eps mu) per step.
///
/// Stopping and stall detection use the model's point gap: root-type norms
/// (Cygan, the max-type Carnot norms) turn 1e-16 of coordinate roundoff into
/// 1e-8 or 1e-5 of distance, so d cannot resolve the last digits of w.
template <DilatationStructure M>
MenelaosResult<point_t<M>> menelaos_iterate(const M& s, const point_t<M>& x, const scale_t<M>& eps,
                                            const point_t<M>& y, const scale_t<M>& mu,
                                            const MenelaosOptions& opt = {}) {
  if (!(eps.nu() > 0.0 && eps.nu() < 1.0 && mu.nu() > 0.0 && mu.nu() < 1.0)) {
    throw std::invalid_argument("menelaos_iterate: nu(eps) and nu(mu) must lie in (0, 1)");
  }
  MenelaosResult<point_t<M>> r;
  auto xn = x;
  auto yn = y;
  double d = s.distance(xn, yn);
  double gap = detail::gap(s, xn, yn);
  std::size_t stall = 0;
  while (gap > opt.tol) {
    if (r.iterations >= opt.max_iter) {
      throw MaxIterExceeded("menelaos_iterate: no convergence in " + std::to_string(opt.max_iter) + " steps");
    }
    const auto y_next = s.dilate(xn, eps, yn);
    const auto x_next = s.dilate(y_next, mu, xn);
    xn = x_next;
    yn = y_next;
    ++r.iterations;
    if (s.distance(x, xn) > s.codomain_radius()) {
      throw DomainViolation("menelaos_iterate: iterates left the codomain ball");
    }
    const double d_next = s.distance(xn, yn);
    const double gap_next = detail::gap(s, xn, yn);
    if (d > opt.rate_floor) r.rates.push_back(d_next / d);
    stall = gap_next >= gap ? stall + 1 : 0;
    d = d_next;
    gap = gap_next;
    if (stall >= opt.stall_steps) {
      if (gap > opt.noise_floor) {
        throw MaxIterExceeded("menelaos_iterate: contraction stalled at gap " + std::to_string(gap));
      }
      r.noise_limited = true;
      break;
    }
  }
  r.w = yn;
  r.residual = d;
  if (!r.rates.empty()) {
    double sum = 0.0;
    for (double q : r.rates) sum += q;
    r.rate = sum / static_cast<double>(r.rates.size());
  }
  const auto composite_scale = eps * mu;
  for (const auto& p : probe_points(s, x, s.closeness_budget(), 0)) {
    r.probe_defect = std::max(r.probe_defect, detail::gap(s, s.dilate(x, eps, s.dilate(y, mu, p)),
                                                          s.dilate(r.w, composite_scale, p)));
  }
  return r;
}

/// Independent fixed-point oracle: iterate u -> delta^x_eps delta^y_mu u, a
/// contraction of factor nu(eps mu), until successive points agree within tol.
template <DilatationStructure M>
point_t<M> banach_oracle(const M& s, const point_t<M>& x, const scale_t<M>& eps, const point_t<M>& y,
                         const scale_t<M>& mu, const point_t<M>& u0, double tol = 1e-12,
                         std::size_t max_iter = 10000) {
  if (!((eps * mu).nu() < 1.0)) throw std::invalid_argument("banach_oracle: need nu(eps mu) < 1");
  auto u = u0;
  for (std::size_t i = 0; i < max_iter; ++i) {
    auto next = s.dilate(x, eps, s.dilate(y, mu, u));
    const double step = detail::gap(s, next, u);
    u = std::move(next);
    if (step <= tol) return u;
  }
  throw MaxIterExceeded("banach_oracle: no convergence in " + std::to_string(max_iter) + " steps");
}

}  // namespace dilatation
