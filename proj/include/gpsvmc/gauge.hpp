#pragma once

#include <array>
#include <cstdint>

#include "gpsvmc/hilbert.hpp"

namespace gps {

// Running particle counts of a configuration prefix.
struct PrefixCounts {
  int up = 0;
  int down = 0;  // unused for D=2

  void add(std::uint8_t s, GaugeConstraint::Kind kind) {
    if (kind == GaugeConstraint::Kind::SpinSz) {
      up += (s == 1);
    } else {
      up += has_up(s) ? 1 : 0;
      down += has_down(s) ? 1 : 0;
    }
  }
};

// Feasibility of each local state at position i given the counts of the
// assigned prefix x_<i: true iff the choice can still be completed to a
// configuration in the constrained sector. Exact counting bounds: every
// remaining site can carry at most one up and one down unit.
std::array<bool, 4> gauge_mask_counts(const PrefixCounts& counts, int position, int n_sites,
                                      int local_dim, const GaugeConstraint& g);

// Same, from an explicit prefix (positions < i of x are read). Throws if the
// prefix is already infeasible.
std::array<bool, 4> gauge_mask(const Configuration& x_prefix, int position, int n_sites,
                               int local_dim, const GaugeConstraint& g);

}  // namespace gps
