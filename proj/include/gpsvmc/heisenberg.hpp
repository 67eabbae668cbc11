#pragma once

#include "gpsvmc/hamiltonian.hpp"
#include "gpsvmc/hilbert.hpp"

namespace gps {

// Nearest-neighbour spin-1/2 exchange H = J sum_<ij> S_i . S_j in the S^z
// product basis. Diagonal: J/4 per aligned bond, -J/4 per anti-aligned bond;
// anti-aligned bonds contribute an exchange term of element J/2 flipping both
// spins (-J/2 with the Marshall sign rule applied). Configurations are
// indexed by ordering position.
class HeisenbergHamiltonian final : public Hamiltonian {
 public:
  HeisenbergHamiltonian(double J, Lattice lattice, SiteOrdering ordering, bool marshall = false);

  int n_sites() const override { return n_; }
  int local_dim() const override { return 2; }
  void connected(const Configuration& x, std::vector<ConnectedTerm>& out) const override;

  double coupling() const { return j_; }
  bool marshall() const { return marshall_; }
  const Lattice& lattice() const { return lattice_; }
  const SiteOrdering& ordering() const { return ordering_; }
  int n_bonds() const { return static_cast<int>(bonds_.size()); }

 private:
  double j_;
  Lattice lattice_;
  SiteOrdering ordering_;
  bool marshall_;
  int n_;
  std::vector<std::pair<int, int>> bonds_;  // position pairs
};

// Marshall-Peierls basis rotation: negates the exchange elements, leaving the
// spectrum unchanged. Requires a bipartite lattice (periodic axes of even
// length).
HeisenbergHamiltonian marshall_transform(const HeisenbergHamiltonian& h);

}  // namespace gps
