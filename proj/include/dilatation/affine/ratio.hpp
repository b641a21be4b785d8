#pragma once

#include <cmath>
#include <stdexcept>

#include "dilatation/models/conical.hpp"
#include "dilatation/models/heisenberg.hpp"

namespace dilatation {

/// h_eps(x) = x delta_eps(x^-1) = delta^x_eps e.
template <ConicalGroup G>
typename G::element_type h_map(const G& g, const typename G::scale_type& eps,
                               const typename G::element_type& x) {
  if (!(eps.nu() > 0.0 && eps.nu() < 1.0)) throw std::invalid_argument("h_map: nu(eps) must lie in (0, 1)");
  return g.product(x, g.dilate(eps, g.inverse(x)));
}

template <class P>
struct GMapResult {
  P value;
  double bound = 0.0;  // nu^{N+1} / (1 - nu) * ||y||, the distance to the infinite product
};

/// g_eps(y) truncated to delta_{eps^0}(y) delta_{eps^1}(y) ... delta_{eps^N}(y),
/// multiplied left to right. It inverts h_eps.
template <ConicalGroup G>
GMapResult<typename G::element_type> g_map(const G& g, const typename G::scale_type& eps,
                                           const typename G::element_type& y, int n) {
  const double nu = eps.nu();
  if (!(nu > 0.0 && nu < 1.0)) throw std::invalid_argument("g_map: nu(eps) must lie in (0, 1)");
  if (n < 1) throw std::invalid_argument("g_map: truncation order must be >= 1");
  auto power = G::scale_type::identity();
  auto acc = g.identity();
  for (int k = 0; k <= n; ++k) {
    acc = g.product(acc, g.dilate(power, y));
    power = power * eps;
  }
  return {acc, std::pow(nu, n + 1) / (1.0 - nu) * g.norm(y)};
}

/// w(x, y, eps, mu) = g_{eps mu}(h_eps(x) h_mu(delta_eps y)).
template <ConicalGroup G>
typename G::element_type ratio_point(const G& g, const typename G::element_type& x,
                                     const typename G::element_type& y,
                                     const typename G::scale_type& eps,
                                     const typename G::scale_type& mu, int n) {
  return g_map(g, eps * mu, g.product(h_map(g, eps, x), h_map(g, mu, g.dilate(eps, y))), n).value;
}

/// The ratio point on H(n) in closed form.
inline Eigen::VectorXd heisenberg_ratio_closed_form(const HeisenbergGroup& g, const Eigen::VectorXd& X,
                                                    const Eigen::VectorXd& Y, double eps, double mu) {
  const double em = eps * mu;
  if (em == 1.0) throw std::invalid_argument("heisenberg_ratio_closed_form: eps * mu must differ from 1");
  const double den2 = 1.0 - em * em;
  const Eigen::VectorXd x = g.horizontal(X);
  const Eigen::VectorXd y = g.horizontal(Y);
  const Eigen::VectorXd z = (1.0 - eps) / (1.0 - em) * x + eps * (1.0 - mu) / (1.0 - em) * y;
  const double zbar = (1.0 - eps * eps) / den2 * g.vertical(X) +
                      eps * eps * (1.0 - mu * mu) / den2 * g.vertical(Y) +
                      eps * (1.0 - eps) * (1.0 - mu) / (2.0 * den2) * g.omega(x, y);
  return g.make(z, zbar);
}

}  // namespace dilatation
