#pragma once

#include <cmath>
#include <complex>
#include <concepts>
#include <stdexcept>
#include <string>
#include <vector>

namespace dilatation {

/// A commutative group of scale parameters with a valuation into (0, +inf).
///
/// `from_nu(t)` picks the canonical element of valuation t that the sweep
/// harness uses to build its grids; for groups whose valuation image is
/// discrete the nearest representable valuation is taken.
template <class S>
concept ScaleGroup = std::regular<S> && requires(const S a, const S b, double t) {
  { a * b } -> std::same_as<S>;
  { a.inverse() } -> std::same_as<S>;
  { a.nu() } -> std::convertible_to<double>;
  { S::identity() } -> std::same_as<S>;
  { S::from_nu(t) } -> std::same_as<S>;
  { a.to_string() } -> std::convertible_to<std::string>;
};

/// Gamma = (0, +inf) under multiplication, nu = id.
class PositiveReal {
 public:
  constexpr PositiveReal() = default;
  explicit PositiveReal(double value) : value_(value) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw std::invalid_argument("PositiveReal: scale must be finite and > 0");
    }
  }

  double value() const { return value_; }
  double nu() const { return value_; }

  PositiveReal operator*(const PositiveReal& o) const { return PositiveReal(value_ * o.value_); }
  PositiveReal inverse() const { return PositiveReal(1.0 / value_); }
  static PositiveReal identity() { return PositiveReal(1.0); }
  static PositiveReal from_nu(double t) { return PositiveReal(t); }
  std::string to_string() const { return std::to_string(value_); }

  bool operator==(const PositiveReal&) const = default;

 private:
  double value_ = 1.0;
};

/// Gamma = {2^p : p in Z}, nu(2^p) = 2^-p.
///
/// Multiplying a dyadic integer by 2^p with p > 0 contracts its 2-adic norm,
/// which is why the valuation is the reciprocal of the real value.
class DyadicPower {
 public:
  constexpr DyadicPower() = default;
  constexpr explicit DyadicPower(int exponent) : exponent_(exponent) {}

  int exponent() const { return exponent_; }
  double nu() const { return std::ldexp(1.0, -exponent_); }

  DyadicPower operator*(const DyadicPower& o) const { return DyadicPower(exponent_ + o.exponent_); }
  DyadicPower inverse() const { return DyadicPower(-exponent_); }
  static DyadicPower identity() { return DyadicPower(0); }
  static DyadicPower from_nu(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw std::invalid_argument("DyadicPower: valuation must be finite and > 0");
    }
    return DyadicPower(static_cast<int>(std::lround(-std::log2(t))));
  }
  std::string to_string() const { return "2^" + std::to_string(exponent_); }

  bool operator==(const DyadicPower&) const = default;

 private:
  int exponent_ = 0;
};

/// Gamma = C*, nu = |.|. The valuation is not injective.
class ComplexUnit {
 public:
  ComplexUnit() = default;
  explicit ComplexUnit(std::complex<double> value) : value_(value) {
    if (value == std::complex<double>(0.0, 0.0) || !std::isfinite(value.real()) ||
        !std::isfinite(value.imag())) {
      throw std::invalid_argument("ComplexUnit: scale must be finite and nonzero");
    }
  }
  explicit ComplexUnit(double re, double im = 0.0) : ComplexUnit(std::complex<double>(re, im)) {}

  std::complex<double> value() const { return value_; }
  double nu() const { return std::abs(value_); }

  ComplexUnit operator*(const ComplexUnit& o) const { return ComplexUnit(value_ * o.value_); }
  ComplexUnit inverse() const { return ComplexUnit(1.0 / value_); }
  static ComplexUnit identity() { return ComplexUnit(1.0, 0.0); }
  static ComplexUnit from_nu(double t) { return ComplexUnit(t, 0.0); }
  std::string to_string() const {
    return "(" + std::to_string(value_.real()) + "," + std::to_string(value_.imag()) + ")";
  }

  bool operator==(const ComplexUnit&) const = default;

 private:
  std::complex<double> value_{1.0, 0.0};
};

static_assert(ScaleGroup<PositiveReal>);
static_assert(ScaleGroup<DyadicPower>);
static_assert(ScaleGroup<ComplexUnit>);

/// Grid eps = 2^-k for k = kmin..kmax, strictly decreasing in nu.
template <ScaleGroup S>
std::vector<S> dyadic_grid(int kmin, int kmax) {
  if (kmax < kmin) {
    throw std::invalid_argument("dyadic_grid: kmax < kmin");
  }
  std::vector<S> grid;
  grid.reserve(static_cast<std::size_t>(kmax - kmin + 1));
  for (int k = kmin; k <= kmax; ++k) {
    grid.push_back(S::from_nu(std::ldexp(1.0, -k)));
  }
  return grid;
}

template <ScaleGroup S>
bool strictly_decreasing_nu(const std::vector<S>& grid) {
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i].nu() < grid[i - 1].nu())) return false;
  }
  return true;
}

}  // namespace dilatation
