#pragma once

#include <Eigen/Core>
#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "gpsvmc/hilbert.hpp"
#include "gpsvmc/rng.hpp"

namespace gps {

using cplx = std::complex<double>;

// One occupation change: position `site` takes local state `state`.
struct SiteChange {
  int site;
  std::uint8_t state;
};

struct Sample {
  Configuration x;
  cplx log_amp;     // log psi(x) of the sampled model
  double log_prob;  // accumulated log of the sequential conditional probabilities
};

// Per-configuration evaluation state. Concrete models attach their own data;
// peeks may use internal scratch space but leave the logical state unchanged.
struct AmplitudeCacheBase {
  virtual ~AmplitudeCacheBase() = default;
  Configuration config;
  cplx log_amp = 0.0;
};

// Wave function amplitudes in the log domain. Callers exponentiate only in
// ratios. Models that carry variational parameters expose them as a flat
// complex vector; wrappers forward to their base model.
class WaveFunction {
 public:
  virtual ~WaveFunction() = default;

  virtual int n_sites() const = 0;
  virtual int local_dim() const = 0;
  // Whether sum_x |psi|^2 = 1 holds by construction (direct sampling allowed).
  virtual bool normalized() const = 0;

  virtual cplx log_amplitude(const Configuration& x) const = 0;

  virtual std::unique_ptr<AmplitudeCacheBase> make_cache(const Configuration& x) const = 0;
  // log amplitude of the configuration obtained from cache.config by applying
  // `changes` (distinct sites, new state != cached state).
  virtual cplx peek_update(AmplitudeCacheBase& cache, std::span<const SiteChange> changes) const = 0;
  virtual void commit_update(AmplitudeCacheBase& cache, std::span<const SiteChange> changes) const = 0;

  // Direct sampling from |psi|^2; only for normalized models.
  virtual Sample sample(RandomEngine& rng) const;

  virtual int n_params() const { return 0; }
  virtual Eigen::VectorXcd log_derivatives(const Configuration& x) const;
  virtual Eigen::VectorXcd parameters() const;
  virtual void set_parameters(const Eigen::VectorXcd& theta);
};

}  // namespace gps
