#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dilatation/core/errors.hpp"
#include "dilatation/core/format.hpp"
#include "dilatation/core/scale.hpp"
#include "dilatation/models/conical.hpp"
#include "dilatation/models/euclidean.hpp"

namespace dilatation {

/// One structure constant: [e_i, e_j] has coefficient c on e_k (0-based).
struct BracketTerm {
  int i = 0;
  int j = 0;
  int k = 0;
  double c = 0.0;
};

/// Graded nilpotent Lie algebra of step at most 3 given on a basis adapted to
/// the layers V_1, ..., V_m. Basis vectors are numbered layer by layer.
///
/// Construction validates antisymmetry, the grading [V_i, V_j] in V_{i+j},
/// the Jacobi identity and the stratification V_{i+1} = [V_1, V_i].
class CarnotSpec {
 public:
  CarnotSpec(int step, std::vector<int> layers, const std::vector<BracketTerm>& brackets)
      : step_(step), layers_(std::move(layers)) {
    if (step_ < 1 || step_ > 3) throw ModelError("carnot step must be 1, 2 or 3");
    if (static_cast<int>(layers_.size()) != step_) {
      throw ModelError("carnot: need exactly one layer dimension per step");
    }
    for (int d : layers_) {
      if (d < 1) throw ModelError("carnot: layer dimensions must be >= 1");
    }
    dim_ = std::accumulate(layers_.begin(), layers_.end(), 0);
    for (int l = 0; l < step_; ++l) {
      for (int r = 0; r < layers_[l]; ++r) degree_.push_back(l + 1);
    }
    c_.assign(static_cast<std::size_t>(dim_ * dim_ * dim_), 0.0);
    std::vector<char> seen(c_.size(), 0);
    for (const auto& t : brackets) set_bracket(t, seen);
    validate_jacobi();
    validate_stratification();
  }

  int step() const { return step_; }
  const std::vector<int>& layers() const { return layers_; }
  int dimension() const { return dim_; }
  int degree(int basis_index) const { return degree_[basis_index]; }
  int homogeneous_dimension() const {
    int q = 0;
    for (int l = 0; l < step_; ++l) q += (l + 1) * layers_[l];
    return q;
  }
  double constant(int i, int j, int k) const { return c_[index(i, j, k)]; }

  Eigen::VectorXd bracket(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(dim_);
    for (int i = 0; i < dim_; ++i) {
      if (a[i] == 0.0) continue;
      for (int j = 0; j < dim_; ++j) {
        if (b[j] == 0.0) continue;
        const double ab = a[i] * b[j];
        for (int k = 0; k < dim_; ++k) out[k] += ab * c_[index(i, j, k)];
      }
    }
    return out;
  }

  /// Heisenberg algebra h(n): [e_i, e_{n+i}] = e_{2n}.
  static CarnotSpec heisenberg(int n) {
    if (n < 1) throw ModelError("heisenberg spec needs n >= 1");
    std::vector<BracketTerm> b;
    for (int i = 0; i < n; ++i) b.push_back({i, n + i, 2 * n, 1.0});
    return CarnotSpec(2, {2 * n, 1}, b);
  }

  /// Engel algebra: layers [2, 1, 1], [e0, e1] = e2, [e0, e2] = e3.
  static CarnotSpec engel() { return CarnotSpec(3, {2, 1, 1}, {{0, 1, 2, 1.0}, {0, 2, 3, 1.0}}); }

 private:
  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>((i * dim_ + j) * dim_ + k);
  }

  void set_bracket(const BracketTerm& t, std::vector<char>& seen) {
    auto in_range = [&](int v) { return v >= 0 && v < dim_; };
    if (!in_range(t.i) || !in_range(t.j) || !in_range(t.k)) {
      throw ModelError("carnot: bracket index out of range");
    }
    if (!std::isfinite(t.c)) throw ModelError("carnot: bracket constant must be finite");
    if (t.i == t.j) {
      if (t.c != 0.0) throw ModelError("carnot: [e_i, e_i] must vanish");
      return;
    }
    if (t.c != 0.0 && degree_[t.k] != degree_[t.i] + degree_[t.j]) {
      throw ModelError("carnot: bracket [e" + std::to_string(t.i) + ", e" + std::to_string(t.j) +
                       "] must land in layer " + std::to_string(degree_[t.i] + degree_[t.j]));
    }
    const std::size_t fwd = index(t.i, t.j, t.k);
    const std::size_t rev = index(t.j, t.i, t.k);
    if (seen[fwd] && c_[fwd] != t.c) throw ModelError("carnot: conflicting bracket constants");
    if (seen[rev] && c_[rev] != -t.c) throw ModelError("carnot: bracket is not antisymmetric");
    c_[fwd] = t.c;
    c_[rev] = -t.c;
    seen[fwd] = seen[rev] = 1;
  }

  Eigen::VectorXd basis(int i) const { return Eigen::VectorXd::Unit(dim_, i); }

  void validate_jacobi() const {
    for (int i = 0; i < dim_; ++i) {
      for (int j = 0; j < dim_; ++j) {
        for (int k = 0; k < dim_; ++k) {
          const auto a = basis(i), b = basis(j), c = basis(k);
          const Eigen::VectorXd r =
              bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) + bracket(c, bracket(a, b));
          if (r.lpNorm<Eigen::Infinity>() > 1e-12) throw ModelError("carnot: Jacobi identity fails");
        }
      }
    }
  }

  void validate_stratification() const {
    int first = 0;
    for (int l = 0; l + 1 < step_; ++l) {
      const int next_first = first + layers_[l];
      // Columns spanning [V_1, V_{l+1}], restricted to the coordinates of V_{l+2}.
      Eigen::MatrixXd span(layers_[l + 1], layers_[0] * layers_[l]);
      int col = 0;
      for (int a = 0; a < layers_[0]; ++a) {
        for (int b = 0; b < layers_[l]; ++b) {
          span.col(col++) = bracket(basis(a), basis(first + b)).segment(next_first, layers_[l + 1]);
        }
      }
      if (Eigen::FullPivLU<Eigen::MatrixXd>(span).rank() != layers_[l + 1]) {
        throw ModelError("carnot: layer " + std::to_string(l + 2) + " is not generated by [V_1, V_" +
                         std::to_string(l + 1) + "]");
      }
      first = next_first;
    }
  }

  int step_;
  std::vector<int> layers_;
  int dim_ = 0;
  std::vector<int> degree_;
  std::vector<double> c_;
};

/// The simply connected group of a CarnotSpec in exponential coordinates.
///
/// The product is the Baker-Campbell-Hausdorff series, which stops at degree
/// three for step <= 3. The norm is max_i |a_i|^(1/i) over the layer parts
/// a_i, a quasi-norm: see subadditivity_constant.
class CarnotGroup {
 public:
  using element_type = Eigen::VectorXd;
  using scale_type = PositiveReal;

  explicit CarnotGroup(CarnotSpec spec) : spec_(std::move(spec)) {}

  const CarnotSpec& spec() const { return spec_; }
  int dimension() const { return spec_.dimension(); }

  element_type identity() const { return Eigen::VectorXd::Zero(dimension()); }

  element_type product(const element_type& a, const element_type& b) const {
    element_type out = a + b;
    if (spec_.step() == 1) return out;
    const Eigen::VectorXd ab = spec_.bracket(a, b);
    out += 0.5 * ab;
    if (spec_.step() == 3) out += (spec_.bracket(a, ab) - spec_.bracket(b, ab)) / 12.0;
    return out;
  }

  element_type inverse(const element_type& a) const { return -a; }

  element_type dilate(const scale_type& eps, const element_type& a) const {
    element_type b = a;
    const double e = eps.value();
    int offset = 0;
    double power = e;
    for (int d : spec_.layers()) {
      b.segment(offset, d) *= power;
      offset += d;
      power *= e;
    }
    return b;
  }

  double norm(const element_type& a) const {
    double m = 0.0;
    int offset = 0;
    for (std::size_t l = 0; l < spec_.layers().size(); ++l) {
      const int d = spec_.layers()[l];
      const double layer = a.segment(offset, d).norm();
      m = std::max(m, std::pow(layer, 1.0 / static_cast<double>(l + 1)));
      offset += d;
    }
    return m;
  }

  element_type sample(Rng& rng, double r) const {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    element_type a(dimension());
    int offset = 0;
    for (int d : spec_.layers()) {
      a.segment(offset, d) = detail::random_in_unit_ball(d, rng);
      offset += d;
    }
    const double n0 = norm(a);
    if (n0 == 0.0) return identity();
    const double target = r * unit(rng);
    return dilate(PositiveReal(target > 0.0 ? target / n0 : 1e-300), a);
  }

  std::vector<element_type> lattice(double r) const { return detail::axis_lattice(*this, dimension(), r); }

  std::string name() const {
    std::string s = "carnot(step=" + std::to_string(spec_.step()) + ",layers=";
    for (std::size_t i = 0; i < spec_.layers().size(); ++i) {
      if (i) s += "/";
      s += std::to_string(spec_.layers()[i]);
    }
    return s + ")";
  }
  std::string format(const element_type& a) const { return format_vector(a); }

 private:
  CarnotSpec spec_;
};

/// Smallest observed C with |ab| <= C (|a| + |b|) over `samples` random pairs
/// in the unit ball. The max-type norm need not be subadditive, so this is
/// measured instead of assumed.
inline double subadditivity_constant(const CarnotGroup& g, std::size_t samples, std::uint64_t seed) {
  Rng rng(seed);
  double c = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const auto a = g.sample(rng, 1.0);
    const auto b = g.sample(rng, 1.0);
    const double den = g.norm(a) + g.norm(b);
    if (den > 0.0) c = std::max(c, g.norm(g.product(a, b)) / den);
  }
  return c;
}

using CarnotModel = ConicalStructure<CarnotGroup>;

inline CarnotModel make_carnot(CarnotSpec spec) { return CarnotModel(CarnotGroup(std::move(spec))); }

}  // namespace dilatation
