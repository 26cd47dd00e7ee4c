#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "arks/grid.hpp"

namespace arks::testing {

// splitmix64; fixed seeds keep every property test reproducible.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : s_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }

  Field field(const GridPtr& g, double lo = 0.0, double hi = 1.0) {
    Field f(g);
    for (auto& x : f.values) x = uniform(lo, hi);
    return f;
  }

  /// One of the four geometries with a small random resolution.
  GridPtr grid() {
    switch (integer(0, 3)) {
      case 0: return share(Grid::interval(uniform(0.5, 2.0), integer(4, 64)));
      case 1: return share(Grid::rectangle(uniform(0.5, 2.0), uniform(0.5, 2.0), integer(4, 24), integer(4, 24)));
      case 2: return share(Grid::radial_disk(uniform(0.5, 2.0), integer(4, 64)));
      default: return share(Grid::radial_ball(uniform(0.5, 2.0), integer(4, 64)));
    }
  }

 private:
  std::uint64_t s_;
};

inline double sup_diff(const Field& a, const Field& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace arks::testing
