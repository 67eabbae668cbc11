#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gps {

// Occupation string x in {0..D-1}^N, indexed by ordering position.
// Local state encoding: D=2 spins: 0 = down, 1 = up.
// D=4 fermionic sites:  0 = empty, 1 = up, 2 = down, 3 = doubly occupied.
using Configuration = std::vector<std::uint8_t>;

inline bool has_up(std::uint8_t s) { return s == 1 || s == 3; }
inline bool has_down(std::uint8_t s) { return s == 2 || s == 3; }

// FNV-1a over the occupation bytes; used for dedup maps and sector indices.
struct ConfigHash {
  std::size_t operator()(const Configuration& c) const {
    std::uint64_t h = 1469598103934665603ull;
    for (std::uint8_t b : c) {
      h ^= b;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

enum class Boundary { Open, Periodic, Antiperiodic };

Boundary boundary_from_string(const std::string& s);
std::string to_string(Boundary b);

// Rectangular lattice, 1D or 2D. Site indices are row-major over (row, col);
// coordinates are integer vectors (row, col) with col the fastest axis in 2D.
struct Lattice {
  std::vector<int> dims;           // (L,) or (Lx, Ly) = (rows, cols)
  std::vector<Boundary> boundary;  // one entry per axis

  Lattice() = default;
  Lattice(std::vector<int> d, std::vector<Boundary> b);
  static Lattice chain(int length, Boundary b);
  static Lattice square(int rows, int cols, Boundary b);

  int rank() const { return static_cast<int>(dims.size()); }
  int n_sites() const;
  std::array<int, 2> coords(int site) const;  // (row, col); col = 0 in 1D
  int site_at(std::array<int, 2> rc) const;
  bool is_square() const { return rank() == 2 && dims[0] == dims[1]; }
  // Nearest-neighbour bonds as unordered unique site pairs, wrap flag set for
  // bonds closed through a periodic/antiperiodic axis.
  struct Bond {
    int a, b;
    bool wrap;
  };
  std::vector<Bond> bonds() const;
};

// Shortest displacement r_i - r_j between two sites. Periodic/antiperiodic
// axes are reduced to the minimum image in (-L/2, L/2]; ties at L/2 resolve to
// the positive representative. Open axes keep the raw difference.
std::array<int, 2> displacement(const Lattice& lat, int site_i, int site_j);

// Bijection between lattice sites and 1D ordering positions.
struct SiteOrdering {
  std::vector<int> site_to_pos;
  std::vector<int> pos_to_site;

  static SiteOrdering identity(int n);
  static SiteOrdering from_pos_to_site(std::vector<int> pos_to_site);
  int n() const { return static_cast<int>(site_to_pos.size()); }
};

// Boustrophedon traversal: row-major with every odd row reversed. 1D lattices
// get the identity ordering.
SiteOrdering zigzag_ordering(const Lattice& lat);

// Conserved-quantity sector. For D=2 the target is the number of up spins
// (n_up = N/2 + Sz); for D=4 the per-spin electron counts.
struct GaugeConstraint {
  enum class Kind { SpinSz, ElectronNumber };
  Kind kind;
  int n_up = 0;
  int n_down = 0;  // unused for SpinSz

  static GaugeConstraint spin_sz(int n_sites, int twice_sz);
  static GaugeConstraint electrons(int n_up, int n_down);
  bool satisfied(const Configuration& x) const;
};

// All configurations of {0..D-1}^N meeting the constraint, lexicographic
// order. Guarded against D^N > 2^24.
std::vector<Configuration> enumerate_sector(int n_sites, int local_dim,
                                            const std::optional<GaugeConstraint>& constraint);

}  // namespace gps
