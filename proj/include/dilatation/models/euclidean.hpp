#pragma once

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dilatation/core/format.hpp"
#include "dilatation/core/scale.hpp"
#include "dilatation/core/structure.hpp"
#include "dilatation/models/conical.hpp"

namespace dilatation {

namespace detail {
/// Uniform direction on the Euclidean unit sphere of R^n.
inline Eigen::VectorXd random_direction(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(n);
  do {
    for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  } while (v.norm() == 0.0);
  return v / v.norm();
}

/// Point drawn uniformly from the open unit ball of R^n.
inline Eigen::VectorXd random_in_unit_ball(Eigen::Index n, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (n == 0) return Eigen::VectorXd(0);
  return random_direction(n, rng) * std::pow(unit(rng), 1.0 / static_cast<double>(n));
}

/// Points +-e_i of every coordinate axis, pushed by a dilatation to norm r/2.
template <class G>
std::vector<Eigen::VectorXd> axis_lattice(const G& g, Eigen::Index n, double r) {
  std::vector<Eigen::VectorXd> out;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (double sign : {1.0, -1.0}) {
      const Eigen::VectorXd a = sign * Eigen::VectorXd::Unit(n, i);
      out.push_back(g.dilate(typename G::scale_type(0.5 * r / g.norm(a)), a));
    }
  }
  return out;
}
}  // namespace detail

/// (R^n, +) with delta_eps a = eps a and a p-norm, p >= 1.
class EuclideanGroup {
 public:
  using element_type = Eigen::VectorXd;
  using scale_type = PositiveReal;

  explicit EuclideanGroup(int n, double p = 2.0) : n_(n), p_(p) {
    if (n < 1) throw std::invalid_argument("EuclideanGroup: dimension must be >= 1");
    if (!(p >= 1.0)) throw std::invalid_argument("EuclideanGroup: norm exponent must be >= 1");
  }

  int dimension() const { return n_; }
  double norm_exponent() const { return p_; }

  element_type identity() const { return Eigen::VectorXd::Zero(n_); }
  element_type product(const element_type& a, const element_type& b) const { return a + b; }
  element_type inverse(const element_type& a) const { return -a; }
  element_type dilate(const scale_type& eps, const element_type& a) const { return eps.value() * a; }

  double norm(const element_type& a) const {
    if (p_ == 2.0) return a.norm();
    if (std::isinf(p_)) return a.lpNorm<Eigen::Infinity>();
    double s = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) s += std::pow(std::abs(a[i]), p_);
    return std::pow(s, 1.0 / p_);
  }

  element_type sample(Rng& rng, double r) const {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Eigen::VectorXd dir = detail::random_direction(n_, rng);
    const double target = r * std::pow(unit(rng), 1.0 / n_);
    return dir * (target / norm(dir));
  }

  std::vector<element_type> lattice(double r) const { return detail::axis_lattice(*this, n_, r); }

  std::string name() const {
    return "euclidean(n=" + std::to_string(n_) + ",p=" + format_double(p_) + ")";
  }
  std::string format(const element_type& a) const { return format_vector(a); }

 private:
  int n_;
  double p_;
};

using EuclideanModel = ConicalStructure<EuclideanGroup>;

inline EuclideanModel make_euclidean(int n, double p = 2.0) {
  return EuclideanModel(EuclideanGroup(n, p));
}

}  // namespace dilatation
