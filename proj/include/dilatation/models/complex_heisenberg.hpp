#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dilatation/core/format.hpp"
#include "dilatation/core/scale.hpp"
#include "dilatation/models/conical.hpp"

namespace dilatation {

/// N = C x R with (x, x')(y, y') = (x + y, x' + y' + Im(x conj(y)) / 2) and
/// complex dilatations delta_eps(x, x') = (eps x, |eps|^2 x').
///
/// A point is stored as (Re x, Im x, x'). The norm (|x|^4 + 16 x'^2)^(1/4) is
/// homogeneous for |eps|.
class ComplexHeisenbergGroup {
 public:
  using element_type = Eigen::VectorXd;
  using scale_type = ComplexUnit;

  static element_type make(std::complex<double> x, double vertical) {
    element_type a(3);
    a << x.real(), x.imag(), vertical;
    return a;
  }
  static std::complex<double> horizontal(const element_type& a) { return {a[0], a[1]}; }
  static double vertical(const element_type& a) { return a[2]; }

  element_type identity() const { return Eigen::VectorXd::Zero(3); }

  element_type product(const element_type& a, const element_type& b) const {
    const auto x = horizontal(a), y = horizontal(b);
    return make(x + y, a[2] + b[2] + 0.5 * (x * std::conj(y)).imag());
  }

  element_type inverse(const element_type& a) const { return -a; }

  element_type dilate(const scale_type& eps, const element_type& a) const {
    const double n = eps.nu();
    return make(eps.value() * horizontal(a), n * n * a[2]);
  }

  double norm(const element_type& a) const {
    const double h2 = a[0] * a[0] + a[1] * a[1];
    return std::pow(h2 * h2 + 16.0 * a[2] * a[2], 0.25);
  }

  element_type sample(Rng& rng, double r) const {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    element_type a(3);
    a << normal(rng), normal(rng), normal(rng);
    const double n0 = norm(a);
    if (n0 == 0.0) return identity();
    const double target = r * unit(rng);
    return dilate(ComplexUnit(target > 0.0 ? target / n0 : 1e-300, 0.0), a);
  }

  std::vector<element_type> lattice(double r) const {
    std::vector<element_type> out;
    for (int i = 0; i < 3; ++i) {
      for (double sign : {1.0, -1.0}) {
        const element_type a = sign * Eigen::VectorXd::Unit(3, i);
        out.push_back(dilate(ComplexUnit(0.5 * r / norm(a), 0.0), a));
      }
    }
    return out;
  }

  std::string name() const { return "complex_heisenberg"; }
  std::string format(const element_type& a) const { return format_vector(a); }
};

using ComplexHeisenbergModel = ConicalStructure<ComplexHeisenbergGroup>;

inline ComplexHeisenbergModel make_complex_heisenberg() {
  return ComplexHeisenbergModel(ComplexHeisenbergGroup{});
}

}  // namespace dilatation
