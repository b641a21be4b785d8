#pragma once

#include <cstddef>
#include <cstdint>

namespace dilatation {

/// Numeric knobs shared by the harness, the tangent extraction and the
/// Menelaos solvers. The CLI fills one of these from the experiment config.
struct Tolerances {
  double identity = 1e-9;          // residual of exact algebraic identities
  double fixed_point = 1e-12;      // contraction iteration stopping distance
  double jitter = 1.5;             // allowed growth between successive defects
  double cauchy_shrink = 1.3;      // required shrink of successive limit gaps
  double noise = 1e-12;            // defects below this are treated as zero
  double limit_decrease = 0.1;     // final/initial ratio required of limit sweeps
  double differentiability = 1e-4; // residual accepted for a derivative at finest eps
};

struct GridSpec {
  int kmin = 2;
  int kmax = 12;
};

struct SamplingSpec {
  std::size_t sample_count = 64;
  std::uint64_t seed = 0;
};

}  // namespace dilatation
