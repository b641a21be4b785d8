#pragma once

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dilatation/core/format.hpp"
#include "dilatation/core/scale.hpp"
#include "dilatation/models/conical.hpp"
#include "dilatation/models/euclidean.hpp"

namespace dilatation {

/// The Heisenberg group H(n) on R^{2n+1}.
///
/// A point is (x, xbar) with x in R^{2n} stored first and xbar last. The
/// product is (x + y, xbar + ybar + omega(x, y) / 2) with the standard
/// symplectic form omega(x, y) = sum_i x_i y_{n+i} - x_{n+i} y_i, dilatations
/// are delta_eps(x, xbar) = (eps x, eps^2 xbar) and the norm is the Cygan norm
/// (|x|^4 + 16 xbar^2)^(1/4).
class HeisenbergGroup {
 public:
  using element_type = Eigen::VectorXd;
  using scale_type = PositiveReal;

  explicit HeisenbergGroup(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("HeisenbergGroup: n must be >= 1");
  }

  int n() const { return n_; }
  int dimension() const { return 2 * n_ + 1; }

  double omega(const Eigen::Ref<const Eigen::VectorXd>& x,
               const Eigen::Ref<const Eigen::VectorXd>& y) const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i) s += x[i] * y[n_ + i] - x[n_ + i] * y[i];
    return s;
  }

  element_type make(const Eigen::VectorXd& horizontal, double vertical) const {
    if (horizontal.size() != 2 * n_) throw std::invalid_argument("HeisenbergGroup: bad horizontal size");
    element_type a(dimension());
    a.head(2 * n_) = horizontal;
    a[2 * n_] = vertical;
    return a;
  }
  auto horizontal(const element_type& a) const { return a.head(2 * n_); }
  double vertical(const element_type& a) const { return a[2 * n_]; }

  element_type identity() const { return Eigen::VectorXd::Zero(dimension()); }

  element_type product(const element_type& a, const element_type& b) const {
    element_type c = a + b;
    c[2 * n_] += 0.5 * omega(a.head(2 * n_), b.head(2 * n_));
    return c;
  }

  element_type inverse(const element_type& a) const { return -a; }

  element_type dilate(const scale_type& eps, const element_type& a) const {
    const double e = eps.value();
    element_type b = a;
    b.head(2 * n_) *= e;
    b[2 * n_] *= e * e;
    return b;
  }

  double norm(const element_type& a) const {
    const double h2 = a.head(2 * n_).squaredNorm();
    const double t = a[2 * n_];
    return std::pow(h2 * h2 + 16.0 * t * t, 0.25);
  }

  element_type sample(Rng& rng, double r) const {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    element_type a(dimension());
    a.head(2 * n_) = detail::random_in_unit_ball(2 * n_, rng);
    a[2 * n_] = unit(rng) - 0.5;
    const double n0 = norm(a);
    if (n0 == 0.0) return identity();
    const double target = r * unit(rng);
    return dilate(PositiveReal(target > 0.0 ? target / n0 : 1e-300), a);
  }

  std::vector<element_type> lattice(double r) const { return detail::axis_lattice(*this, dimension(), r); }

  std::string name() const { return "heisenberg(n=" + std::to_string(n_) + ")"; }
  std::string format(const element_type& a) const { return format_vector(a); }

 private:
  int n_;
};

using HeisenbergModel = ConicalStructure<HeisenbergGroup>;

inline HeisenbergModel make_heisenberg(int n) { return HeisenbergModel(HeisenbergGroup(n)); }

}  // namespace dilatation
