#pragma once

#include <string>

#include "gpsvmc/hamiltonian.hpp"
#include "gpsvmc/hilbert.hpp"

namespace gps {

// One- and two-electron integrals of a second-quantized molecular
// Hamiltonian over L spatial orbitals, chemist convention (pq|rs) with the
// usual 8-fold permutation symmetry, in hartree.
struct AbInitioIntegrals {
  int n_orb = 0;
  double e_core = 0.0;
  std::vector<double> h1;  // n_orb^2, row-major
  std::vector<double> h2;  // n_orb^4, index ((p*n+q)*n+r)*n+s

  double one_body(int p, int q) const { return h1[p * n_orb + q]; }
  double eri(int p, int q, int r, int s) const {
    return h2[((static_cast<std::size_t>(p) * n_orb + q) * n_orb + r) * n_orb + s];
  }

  // header metadata, used for default sector selection
  int n_elec = -1;
  int ms2 = 0;
};

// FCIDUMP reader: "&FCI NORB=..,NELEC=..,MS2=.., ... &END" (or "/") header,
// then "w i j k l" lines with 1-based indices; k=l=0 gives one-body entries,
// all-zero indices the core energy. Values are expanded to all 8 symmetry
// images; conflicting duplicates are rejected.
AbInitioIntegrals parse_fcidump(const std::string& path);

// Second-quantized ab initio Hamiltonian over D=4 occupation strings of the
// spatial orbitals. Orbital `ordering` permutes orbitals to configuration
// positions; fermionic signs use the canonical spin-orbital order (all up
// orbitals in position order, then all down). Off-diagonal terms with
// |element| < cutoff are dropped.
class AbInitioHamiltonian final : public Hamiltonian {
 public:
  AbInitioHamiltonian(AbInitioIntegrals integrals, SiteOrdering ordering, double cutoff = 1e-12);

  int n_sites() const override { return n_; }
  int local_dim() const override { return 4; }
  void connected(const Configuration& x, std::vector<ConnectedTerm>& out) const override;

  const AbInitioIntegrals& integrals() const { return ints_; }

 private:
  // spatial orbital (file order) of configuration position p
  int orb(int p) const { return ordering_.pos_to_site[p]; }

  AbInitioIntegrals ints_;
  SiteOrdering ordering_;
  int n_;
  double cutoff_;
};

}  // namespace gps
