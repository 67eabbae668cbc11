#pragma once

#include "gpsvmc/hamiltonian.hpp"
#include "gpsvmc/hilbert.hpp"

namespace gps {

// 1D Fermi-Hubbard chain, H = -t sum_<ij>s (c+_is c_js + h.c.) + U sum_i n_iu n_id,
// over D=4 occupation strings. Fermionic signs use the canonical spin-orbital
// ordering: all up orbitals in position order, then all down orbitals, so a
// same-spin hop picks up the parity of the same-spin electrons strictly
// between the two positions. Antiperiodic boundaries flip the sign of the
// wrap-bond hopping.
class HubbardHamiltonian final : public Hamiltonian {
 public:
  HubbardHamiltonian(double t, double U, Lattice lattice, SiteOrdering ordering);

  int n_sites() const override { return n_; }
  int local_dim() const override { return 4; }
  void connected(const Configuration& x, std::vector<ConnectedTerm>& out) const override;

  double hopping() const { return t_; }
  double interaction() const { return u_; }
  const Lattice& lattice() const { return lattice_; }

 private:
  double t_, u_;
  Lattice lattice_;
  SiteOrdering ordering_;
  int n_;
  bool antiperiodic_;
  struct Bond {
    int p, q;
    bool wrap;
  };
  std::vector<Bond> bonds_;
};

}  // namespace gps
