#include "gpsvmc/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gps {

Boundary boundary_from_string(const std::string& s) {
  if (s == "open" || s == "obc") return Boundary::Open;
  if (s == "periodic" || s == "pbc") return Boundary::Periodic;
  if (s == "antiperiodic" || s == "apbc") return Boundary::Antiperiodic;
  throw std::invalid_argument("unknown boundary: " + s);
}

std::string to_string(Boundary b) {
  switch (b) {
    case Boundary::Open: return "open";
    case Boundary::Periodic: return "periodic";
    default: return "antiperiodic";
  }
}

Lattice::Lattice(std::vector<int> d, std::vector<Boundary> b) : dims(std::move(d)), boundary(std::move(b)) {
  if (dims.empty() || dims.size() > 2) throw std::invalid_argument("lattice rank must be 1 or 2");
  if (boundary.size() != dims.size()) throw std::invalid_argument("one boundary per lattice axis required");
  for (int L : dims)
    if (L < 1) throw std::invalid_argument("lattice dimensions must be positive");
}

Lattice Lattice::chain(int length, Boundary b) { return Lattice({length}, {b}); }

Lattice Lattice::square(int rows, int cols, Boundary b) { return Lattice({rows, cols}, {b, b}); }

int Lattice::n_sites() const {
  return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<int>());
}

std::array<int, 2> Lattice::coords(int site) const {
  if (rank() == 1) return {site, 0};
  return {site / dims[1], site % dims[1]};
}

int Lattice::site_at(std::array<int, 2> rc) const {
  if (rank() == 1) return rc[0];
  return rc[0] * dims[1] + rc[1];
}

std::vector<Lattice::Bond> Lattice::bonds() const {
  // +1 step along each axis; wrap steps only for non-open axes. Unordered
  // pairs are deduplicated so an L=2 periodic axis contributes one bond.
  std::vector<Bond> out;
  auto add = [&out](int a, int b, bool wrap) {
    if (a > b) std::swap(a, b);
    for (const Bond& e : out)
      if (e.a == a && e.b == b) return;
    out.push_back({a, b, wrap});
  };
  const int n = n_sites();
  for (int s = 0; s < n; ++s) {
    auto rc = coords(s);
    for (int axis = 0; axis < rank(); ++axis) {
      auto nb = rc;
      nb[axis] += 1;
      bool wrap = false;
      if (nb[axis] == dims[axis]) {
        if (boundary[axis] == Boundary::Open) continue;
        nb[axis] = 0;
        wrap = true;
      }
      add(s, site_at(nb), wrap);
    }
  }
  return out;
}

std::array<int, 2> displacement(const Lattice& lat, int site_i, int site_j) {
  auto ri = lat.coords(site_i);
  auto rj = lat.coords(site_j);
  std::array<int, 2> d = {0, 0};
  for (int axis = 0; axis < lat.rank(); ++axis) {
    int delta = ri[axis] - rj[axis];
    if (lat.boundary[axis] != Boundary::Open) {
      const int L = lat.dims[axis];
      // reduce into (-L/2, L/2]; the tie at -L/2 maps to +L/2
      delta %= L;
      if (delta < 0) delta += L;     // now in [0, L)
      if (2 * delta > L) delta -= L; // (-L/2, L/2]
    }
    d[axis] = delta;
  }
  return d;
}

SiteOrdering SiteOrdering::identity(int n) {
  SiteOrdering o;
  o.site_to_pos.resize(n);
  o.pos_to_site.resize(n);
  std::iota(o.site_to_pos.begin(), o.site_to_pos.end(), 0);
  std::iota(o.pos_to_site.begin(), o.pos_to_site.end(), 0);
  return o;
}

SiteOrdering SiteOrdering::from_pos_to_site(std::vector<int> pos_to_site) {
  const int n = static_cast<int>(pos_to_site.size());
  SiteOrdering o;
  o.pos_to_site = std::move(pos_to_site);
  o.site_to_pos.assign(n, -1);
  for (int p = 0; p < n; ++p) {
    const int s = o.pos_to_site[p];
    if (s < 0 || s >= n || o.site_to_pos[s] != -1)
      throw std::invalid_argument("site ordering is not a permutation");
    o.site_to_pos[s] = p;
  }
  return o;
}

SiteOrdering zigzag_ordering(const Lattice& lat) {
  if (lat.rank() == 1) return SiteOrdering::identity(lat.n_sites());
  std::vector<int> pos_to_site;
  pos_to_site.reserve(lat.n_sites());
  for (int row = 0; row < lat.dims[0]; ++row) {
    if (row % 2 == 0) {
      for (int col = 0; col < lat.dims[1]; ++col) pos_to_site.push_back(lat.site_at({row, col}));
    } else {
      for (int col = lat.dims[1] - 1; col >= 0; --col) pos_to_site.push_back(lat.site_at({row, col}));
    }
  }
  return SiteOrdering::from_pos_to_site(std::move(pos_to_site));
}

GaugeConstraint GaugeConstraint::spin_sz(int n_sites, int twice_sz) {
  if ((n_sites + twice_sz) % 2 != 0)
    throw std::invalid_argument("2*Sz must have the parity of the site count");
  GaugeConstraint g;
  g.kind = Kind::SpinSz;
  g.n_up = (n_sites + twice_sz) / 2;
  if (g.n_up < 0 || g.n_up > n_sites) throw std::invalid_argument("Sz target not achievable");
  return g;
}

GaugeConstraint GaugeConstraint::electrons(int n_up, int n_down) {
  if (n_up < 0 || n_down < 0) throw std::invalid_argument("negative electron count");
  GaugeConstraint g;
  g.kind = Kind::ElectronNumber;
  g.n_up = n_up;
  g.n_down = n_down;
  return g;
}

bool GaugeConstraint::satisfied(const Configuration& x) const {
  int up = 0, down = 0;
  for (std::uint8_t s : x) {
    if (kind == Kind::SpinSz) {
      up += (s == 1);
    } else {
      up += has_up(s) ? 1 : 0;
      down += has_down(s) ? 1 : 0;
    }
  }
  if (kind == Kind::SpinSz) return up == n_up;
  return up == n_up && down == n_down;
}

std::vector<Configuration> enumerate_sector(int n_sites, int local_dim,
                                            const std::optional<GaugeConstraint>& constraint) {
  const double total = std::pow(static_cast<double>(local_dim), n_sites);
  if (total > static_cast<double>(1 << 24)) throw std::runtime_error("sector enumeration guard: D^N > 2^24");
  std::vector<Configuration> out;
  Configuration x(n_sites, 0);
  while (true) {
    if (!constraint || constraint->satisfied(x)) out.push_back(x);
    // lexicographic increment with the leftmost entry most significant
    int k = n_sites - 1;
    while (k >= 0 && x[k] == local_dim - 1) {
      x[k] = 0;
      --k;
    }
    if (k < 0) break;
    ++x[k];
  }
  return out;
}

}  // namespace gps
