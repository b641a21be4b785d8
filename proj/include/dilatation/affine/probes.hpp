#pragma once

#include <cstdint>
#include <vector>

#include "dilatation/core/harness.hpp"
#include "dilatation/core/structure.hpp"

namespace dilatation {

/// Finite stand-in for "all points" when two maps are compared: the center,
/// up to six lattice neighbours at distance about r/2, then `randoms` seeded
/// points of B(center, r). Models without a lattice get only the random part.
template <DilatationStructure M>
std::vector<point_t<M>> probe_points(const M& s, const point_t<M>& center, double r,
                                     std::uint64_t seed = 0, std::size_t randoms = 9) {
  std::vector<point_t<M>> out{center};
  if constexpr (HasLattice<M>) {
    auto ring = s.lattice_near(center, r);
    for (std::size_t i = 0; i < ring.size() && i < 6; ++i) out.push_back(ring[i]);
  }
  Rng rng(seed);
  for (std::size_t i = 0; i < randoms; ++i) out.push_back(s.sample_near(center, r, rng));
  return out;
}

}  // namespace dilatation
