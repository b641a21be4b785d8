#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "dilatation/core/format.hpp"
#include "dilatation/core/report.hpp"
#include "dilatation/models/complex_heisenberg.hpp"

namespace dilatation {

/// C = delta^X_eps delta^Y_mu on the complex Heisenberg group with X = e,
/// compared with the left translation u -> C(e) u over the probes. With
/// eps mu = -1 the composite has linear part delta_{-1}, so the defect is
/// positive and the check passes when it exceeds `threshold`.
///
/// The notes also settle whether C is a dilatation delta^c_lambda: on the
/// finite grid of centers and coefficients below, the smallest probe defect
/// is reported, together with the vertical part of C(e). Every
/// c delta_{-1}(c^-1) has vertical part 0, so a nonzero value rules out all
/// dilatations of coefficient -1, the only ones with the right linear part.
inline ConvergenceReport counterexample_check(const ComplexHeisenbergModel& m, double eps,
                                              std::complex<double> mu, const Eigen::VectorXd& Y,
                                              const std::vector<Eigen::VectorXd>& probes,
                                              double threshold = 1e-6, bool search_dilatations = true) {
  const auto& g = m.group();
  const Eigen::VectorXd X = g.identity();
  const ComplexUnit e(eps, 0.0);
  const ComplexUnit u_mu(mu);
  auto C = [&](const Eigen::VectorXd& p) { return m.dilate(X, e, m.dilate(Y, u_mu, p)); };
  const Eigen::VectorXd ce = C(g.identity());

  double defect = 0.0;
  for (const auto& p : probes) defect = std::max(defect, m.point_gap(C(p), g.product(ce, p)));

  ConvergenceReport r;
  r.label = "counterexample";
  r.model = m.name();
  r.samples = probes.size();
  r.nu = {eps};
  r.defect = {defect};
  r.tolerance = threshold;
  r.verdict = defect > threshold;
  r.notes["mu"] = "(" + format_double(mu.real()) + ";" + format_double(mu.imag()) + ")";
  r.notes["vertical_of_C_e"] = format_double(ComplexHeisenbergGroup::vertical(ce));

  if (search_dilatations) {
    // Centers on a 9^3 grid of [-2, 2]^3, coefficients of modulus 1/2, 1, 2
    // at eight angles.
    double best = std::numeric_limits<double>::infinity();
    for (double modulus : {0.5, 1.0, 2.0}) {
      for (int a = 0; a < 8; ++a) {
        const ComplexUnit lambda(std::polar(modulus, a * std::numbers::pi / 4.0));
        for (int i = 0; i < 9; ++i) {
          for (int j = 0; j < 9; ++j) {
            for (int k = 0; k < 9; ++k) {
              const Eigen::VectorXd c =
                  ComplexHeisenbergGroup::make({-2.0 + 0.5 * i, -2.0 + 0.5 * j}, -2.0 + 0.5 * k);
              double worst = 0.0;
              for (const auto& p : probes) {
                worst = std::max(worst, m.point_gap(C(p), m.dilate(c, lambda, p)));
                if (worst >= best) break;
              }
              best = std::min(best, worst);
            }
          }
        }
      }
    }
    r.notes["dilatation_grid_min"] = format_double(best);
  }
  return r;
}

}  // namespace dilatation
