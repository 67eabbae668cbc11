#include "gpsvmc/hubbard.hpp"

#include <stdexcept>

namespace gps {

HubbardHamiltonian::HubbardHamiltonian(double t, double U, Lattice lattice, SiteOrdering ordering)
    : t_(t), u_(U), lattice_(std::move(lattice)), ordering_(std::move(ordering)), n_(lattice_.n_sites()) {
  if (lattice_.rank() != 1) throw std::invalid_argument("Hubbard model: only 1D chains supported");
  if (ordering_.n() != n_) throw std::invalid_argument("ordering size does not match lattice");
  antiperiodic_ = lattice_.boundary[0] == Boundary::Antiperiodic;
  for (const auto& b : lattice_.bonds())
    bonds_.push_back({ordering_.site_to_pos[b.a], ordering_.site_to_pos[b.b], b.wrap});
}

void HubbardHamiltonian::connected(const Configuration& x, std::vector<ConnectedTerm>& out) const {
  out.clear();
  ConnectedTerm diag;
  int doubles = 0;
  for (std::uint8_t s : x) doubles += (s == 3);
  diag.element = cplx(u_ * doubles, 0.0);
  out.push_back(diag);

  auto parity_between = [&x](int a, int b, std::uint8_t spin_bit) {
    if (a > b) std::swap(a, b);
    int count = 0;
    for (int k = a + 1; k < b; ++k) count += (x[k] & spin_bit) ? 1 : 0;
    return (count % 2 == 0) ? 1.0 : -1.0;
  };

  for (const Bond& b : bonds_) {
    const double amp = -t_ * ((b.wrap && antiperiodic_) ? -1.0 : 1.0);
    for (std::uint8_t spin_bit : {std::uint8_t(1), std::uint8_t(2)}) {
      const bool occ_p = x[b.p] & spin_bit;
      const bool occ_q = x[b.q] & spin_bit;
      if (occ_p == occ_q) continue;
      const int from = occ_p ? b.p : b.q;
      const int to = occ_p ? b.q : b.p;
      ConnectedTerm t;
      t.element = cplx(amp * parity_between(from, to, spin_bit), 0.0);
      t.add_change(from, static_cast<std::uint8_t>(x[from] & ~spin_bit));
      t.add_change(to, static_cast<std::uint8_t>(x[to] | spin_bit));
      out.push_back(t);
    }
  }
}

}  // namespace gps
