#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "dilatation/affine/menelaos.hpp"
#include "dilatation/core/config.hpp"
#include "dilatation/core/format.hpp"
#include "dilatation/core/harness.hpp"
#include "dilatation/core/parallel.hpp"
#include "dilatation/core/report.hpp"
#include "dilatation/core/structure.hpp"

namespace dilatation {

/// (x^alpha, y^beta, z^gamma) with gamma = 1/(alpha beta) and no exponent of
/// valuation 1.
template <class P, ScaleGroup S>
class CollinearTriple {
 public:
  CollinearTriple(P x, S alpha, P y, S beta, P z)
      : x_(std::move(x)), y_(std::move(y)), z_(std::move(z)), alpha_(alpha), beta_(beta),
        gamma_((alpha * beta).inverse()) {
    for (const S& e : {alpha_, beta_, gamma_}) {
      if (std::abs(e.nu() - 1.0) <= 1e-12) {
        throw std::invalid_argument("CollinearTriple: every exponent must differ from 1");
      }
    }
  }

  const P& x() const { return x_; }
  const P& y() const { return y_; }
  const P& z() const { return z_; }
  const S& alpha() const { return alpha_; }
  const S& beta() const { return beta_; }
  const S& gamma() const { return gamma_; }

  /// r = alpha / (1 - alpha beta), on valuations.
  double ratio_norm() const { return alpha_.nu() / (1.0 - alpha_.nu() * beta_.nu()); }

  /// (y^beta, z^gamma, x^alpha).
  CollinearTriple rotated() const { return CollinearTriple(y_, beta_, z_, gamma_, x_); }

 private:
  P x_, y_, z_;
  S alpha_, beta_, gamma_;
};

/// Identity defect of delta^x_alpha delta^y_beta delta^z_gamma over the probes.
template <DilatationStructure M>
double collinear_defect(const M& s, const CollinearTriple<point_t<M>, scale_t<M>>& t,
                        const std::vector<point_t<M>>& probes) {
  return parallel_max(probes.size(), [&](std::size_t i) {
    const auto& p = probes[i];
    const auto image = s.dilate(t.x(), t.alpha(), s.dilate(t.y(), t.beta(), s.dilate(t.z(), t.gamma(), p)));
    return detail::gap(s, image, p);
  });
}

template <DilatationStructure M>
ConvergenceReport check_collinear(const M& s, const CollinearTriple<point_t<M>, scale_t<M>>& t,
                                  const std::vector<point_t<M>>& probes, const Tolerances& tol = {}) {
  ConvergenceReport r;
  r.label = "collinear";
  r.model = s.name();
  r.samples = probes.size();
  r.nu = {t.alpha().nu()};
  r.defect = {collinear_defect(s, t, probes)};
  r.tolerance = tol.identity;
  r.verdict = r.final_defect() <= tol.identity;
  r.notes["ratio_norm"] = format_double(t.ratio_norm());
  return r;
}

/// The collinear triple through x^alpha, y^beta: z is the Menelaos point of
/// delta^x_alpha delta^y_beta, so that composite equals delta^z_{alpha beta}.
template <DilatationStructure M>
CollinearTriple<point_t<M>, scale_t<M>> collinear_through(const M& s, const point_t<M>& x,
                                                          const scale_t<M>& alpha, const point_t<M>& y,
                                                          const scale_t<M>& beta) {
  auto m = menelaos_iterate(s, x, alpha, y, beta);
  return CollinearTriple<point_t<M>, scale_t<M>>(x, alpha, y, beta, std::move(m.w));
}

struct ReversedSearch {
  double min_defect = 0.0;
  double best_alpha = 0.0;
  double best_beta = 0.0;
};

/// Smallest defect of (y^beta', x^alpha', z^gamma') over an n x n grid of
/// (alpha', beta') in [lo, hi]^2, gamma' = 1/(alpha' beta').
template <DilatationStructure M>
  requires std::same_as<scale_t<M>, PositiveReal>
ReversedSearch reversed_triple_search(const M& s, const point_t<M>& x, const point_t<M>& y,
                                      const point_t<M>& z, const std::vector<point_t<M>>& probes,
                                      double lo = 1.01, double hi = 4.0, int n = 50) {
  ReversedSearch best{std::numeric_limits<double>::infinity(), 0.0, 0.0};
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double a = lo + step * i;
      const double b = lo + step * j;
      if (std::abs(a * b - 1.0) <= 1e-12) continue;
      CollinearTriple<point_t<M>, PositiveReal> t(y, PositiveReal(b), x, PositiveReal(a), z);
      const double d = collinear_defect(s, t, probes);
      if (d < best.min_defect) best = {d, a, b};
    }
  }
  return best;
}

/// Maps each sampled collinear triple through T and checks that
/// ((Tx)^alpha, (Ty)^beta, (Tz)^gamma) is still collinear.
template <DilatationStructure M>
ConvergenceReport geometric_affinity_check(
    const M& s, const std::function<point_t<M>(const point_t<M>&)>& t,
    const std::vector<CollinearTriple<point_t<M>, scale_t<M>>>& triples,
    const std::vector<point_t<M>>& probes, const Tolerances& tol = {}) {
  ConvergenceReport r;
  r.label = "geometric_affinity";
  r.model = s.name();
  r.samples = triples.size();
  for (const auto& tr : triples) {
    CollinearTriple<point_t<M>, scale_t<M>> mapped(t(tr.x()), tr.alpha(), t(tr.y()), tr.beta(), t(tr.z()));
    r.nu.push_back(tr.alpha().nu());
    r.defect.push_back(collinear_defect(s, mapped, probes));
  }
  r.tolerance = tol.identity;
  r.verdict = r.max_defect() <= tol.identity;
  return r;
}

}  // namespace dilatation
