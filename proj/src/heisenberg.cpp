#include "gpsvmc/heisenberg.hpp"

#include <cmath>
#include <stdexcept>

namespace gps {

HeisenbergHamiltonian::HeisenbergHamiltonian(double J, Lattice lattice, SiteOrdering ordering, bool marshall)
    : j_(J), lattice_(std::move(lattice)), ordering_(std::move(ordering)), marshall_(marshall),
      n_(lattice_.n_sites()) {
  if (ordering_.n() != n_) throw std::invalid_argument("ordering size does not match lattice");
  for (const auto& b : lattice_.bonds())
    bonds_.emplace_back(ordering_.site_to_pos[b.a], ordering_.site_to_pos[b.b]);
}

void HeisenbergHamiltonian::connected(const Configuration& x, std::vector<ConnectedTerm>& out) const {
  out.clear();
  ConnectedTerm diag;
  double dsum = 0.0;
  for (const auto& [p, q] : bonds_) dsum += (x[p] == x[q]) ? 0.25 : -0.25;
  diag.element = cplx(j_ * dsum, 0.0);
  out.push_back(diag);
  const double exch = marshall_ ? -0.5 * j_ : 0.5 * j_;
  for (const auto& [p, q] : bonds_) {
    if (x[p] == x[q]) continue;
    ConnectedTerm t;
    t.element = cplx(exch, 0.0);
    t.add_change(p, x[q]);
    t.add_change(q, x[p]);
    out.push_back(t);
  }
}

HeisenbergHamiltonian marshall_transform(const HeisenbergHamiltonian& h) {
  // bipartiteness: the (row+col) parity 2-colouring must be consistent across
  // every bond, which fails for odd-length periodic axes
  const Lattice& lat = h.lattice();
  for (int axis = 0; axis < lat.rank(); ++axis)
    if (lat.boundary[axis] != Boundary::Open && lat.dims[axis] % 2 != 0)
      throw std::invalid_argument("Marshall transform requires a bipartite lattice");
  return HeisenbergHamiltonian(h.coupling(), lat, h.ordering(), true);
}

}  // namespace gps
