#pragma once

#include <array>
#include <complex>
#include <vector>

#include "gpsvmc/wavefunction.hpp"

namespace gps {

// One term of the connected-configuration expansion of H|x>: the matrix
// element O_{x x'} together with the occupation changes turning x into x'.
// Empty change list encodes the diagonal element.
struct ConnectedTerm {
  std::array<SiteChange, 4> changes;
  int n_changes = 0;
  cplx element{};

  std::span<const SiteChange> change_span() const { return {changes.data(), static_cast<std::size_t>(n_changes)}; }
  void add_change(int site, std::uint8_t state) { changes[n_changes++] = {site, state}; }
};

class Hamiltonian {
 public:
  virtual ~Hamiltonian() = default;
  virtual int n_sites() const = 0;
  virtual int local_dim() const = 0;
  // Appends the diagonal term followed by all off-diagonal connected terms.
  virtual void connected(const Configuration& x, std::vector<ConnectedTerm>& out) const = 0;
};

// Local estimator E_loc(x) = sum_{x'} O_{x x'} psi(x')/psi(x); ratios come
// from fast cache updates. `terms` is caller-provided scratch.
cplx local_energy(const WaveFunction& model, AmplitudeCacheBase& cache, const Hamiltonian& h,
                  std::vector<ConnectedTerm>& terms);

}  // namespace gps
