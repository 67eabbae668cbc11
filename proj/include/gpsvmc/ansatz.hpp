#pragma once

#include <array>
#include <optional>
#include <string>

#include "gpsvmc/gauge.hpp"
#include "gpsvmc/wavefunction.hpp"

namespace gps {

// Correlator family: fully-variational tensors (independent entries per site
// pair) or a translation filter indexed by relative displacement.
enum class Correlator { FullyVariational, Filter };

// The product-of-exponentials variants. Six combinations are valid rows of
// the family (normalized requires masked); weight_sharing is a test-only
// adaptation of the masked fully-variational form with one shared tensor.
struct GpsVariant {
  bool masked = false;
  bool normalized = false;
  Correlator correlator = Correlator::FullyVariational;
  bool weight_sharing = false;

  static GpsVariant gps() { return {false, false, Correlator::FullyVariational, false}; }
  static GpsVariant masked_gps() { return {true, false, Correlator::FullyVariational, false}; }
  static GpsVariant ar_gps() { return {true, true, Correlator::FullyVariational, false}; }
  static GpsVariant filter_gps() { return {false, false, Correlator::Filter, false}; }
  static GpsVariant masked_filter_gps() { return {true, false, Correlator::Filter, false}; }
  static GpsVariant ar_filter_gps() { return {true, true, Correlator::Filter, false}; }
  static GpsVariant ws_ar_gps() { return {true, true, Correlator::FullyVariational, true}; }

  void validate() const;
  std::string name() const;
  static GpsVariant from_name(const std::string& name);
};

// Product-of-exponentials model over occupation strings.
//
//   unmasked fully-variational:  log psi = sum_m prod_j eps[x_j, m, j]
//   masked variants:             log psi = sum_i c_i(x_i),
//                                c_i(y) = sum_m eps_i[y, m, i] prod_{j<i} eps_i[x_j, m, j]
//   filter correlators:          eps_i[., m, j] = eps[., m, offset(r_i - r_j)]
//   normalized variants subtract the per-site log normalizer
//                                n_i = 1/2 log sum_y exp(2 Re c_i(y))
//   with candidates y restricted by the gauge mask when a constraint is set.
//
// Parameters are packed in a canonical flat order: tensor row (correlator
// block, then site / offset), then support index m, then local state. Only
// active entries are allocated, so n_params matches the analytic counts
// (D*M*N for GPS, D*M*N(N+1)/2 for masked/AR, D*M*n_offsets for filters).
//
// T is double (real parameters; all amplitudes positive) or
// std::complex<double>. For complex parameters derivatives are Wirtinger
// derivatives d/d theta at fixed conj(theta).
template <class T>
class GpsModel final : public WaveFunction {
 public:
  using Scalar = T;

  // Evaluation state for one configuration: phi[r][m] is the full product of
  // the r-th correlator's factors at the cached occupations (for masked
  // variants the product over j <= r of Appendix-C style partial products),
  // cond[r] = sum_m phi[r][m], and lognorm[i] the per-site normalizer.
  struct Cache final : AmplitudeCacheBase {
    std::vector<T> phi;
    std::vector<T> cond;
    std::vector<double> lognorm;
    std::vector<int> cum_up, cum_down;  // gauge prefix counts, cum_*[i] = count over positions < i
    T log_amp_t{};
    long rebuild_count = 0;  // times a zero-factor division forced a full rebuild

    // scratch for peeks (logical state above stays valid)
    std::vector<T> s_phi;
    std::vector<T> s_cond;
    std::vector<double> s_lognorm;
    std::vector<int> s_rows;
    bool s_fallback = false;
    T s_log_amp{};
  };

  GpsModel(GpsVariant variant, Lattice lattice, SiteOrdering ordering, int local_dim, int support_dim,
           std::optional<GaugeConstraint> gauge = std::nullopt);

  // near-identity init: entries 1 + scale*N(0,1) (+ i*scale*N(0,1) for
  // complex), drawn in canonical parameter order
  void init_random(std::uint64_t seed, double scale);

  const GpsVariant& variant() const { return variant_; }
  const Lattice& lattice() const { return lattice_; }
  const SiteOrdering& ordering() const { return ordering_; }
  const std::optional<GaugeConstraint>& gauge() const { return gauge_; }
  int support_dim() const { return m_; }
  int n_offsets() const { return n_offsets_; }

  int n_sites() const override { return n_; }
  int local_dim() const override { return d_; }
  bool normalized() const override { return variant_.normalized; }

  int n_params() const override { return static_cast<int>(params_.size()); }
  const Eigen::VectorX<T>& params() const { return params_; }
  void set_params_typed(Eigen::VectorX<T> p);
  Eigen::VectorXcd parameters() const override;
  void set_parameters(const Eigen::VectorXcd& theta) override;

  // canonical flat index of entry (tensor row, support index, local state)
  int param_index(int row, int m, int x) const { return (row * m_ + m) * d_ + x; }
  // tensor row used by correlator i for the occupation of position j
  int slot_row(int i, int j) const;

  T log_amplitude_t(const Configuration& x) const;
  cplx log_amplitude(const Configuration& x) const override;

  // Unnormalized conditional exponents at position pos: entry y is the
  // argument of the exponential with candidate y substituted at pos (product
  // over j < pos for masked variants, over all j != pos otherwise).
  std::array<T, 4> conditional_logs(const Configuration& x, int pos) const;

  void build_cache(const Configuration& x, Cache& cache) const;
  std::unique_ptr<AmplitudeCacheBase> make_cache(const Configuration& x) const override;
  T peek_t(Cache& cache, std::span<const SiteChange> changes) const;
  void commit_t(Cache& cache, std::span<const SiteChange> changes) const;
  cplx peek_update(AmplitudeCacheBase& cache, std::span<const SiteChange> changes) const override;
  void commit_update(AmplitudeCacheBase& cache, std::span<const SiteChange> changes) const override;

  // d log psi / d theta_k for all parameters, canonical order. out must have
  // n_params() entries.
  void log_derivatives_t(const Configuration& x, T* out) const;
  Eigen::VectorXcd log_derivatives(const Configuration& x) const override;

  Sample sample(RandomEngine& rng) const override;

 private:
  int n_correlators() const { return n_corr_; }
  int env_end(int i) const { return variant_.masked ? i + 1 : n_; }  // env(i) = positions [0, env_end)
  const T* row_ptr(int row) const { return params_.data() + row * m_ * d_; }
  // conditional exponents + normalizer of correlator i from its prefix
  // products (prefix[m] = product over j < i); gauge mask applied when set
  void conditionals_from_prefix(int i, const T* prefix, const std::array<bool, 4>& feas,
                                T* cond_out, double* lognorm_out) const;
  std::array<bool, 4> feasible(int pos, const PrefixCounts& counts) const;
  void rebuild_config(const Configuration& base, std::span<const SiteChange> changes,
                      Configuration& out) const;
  void refresh_recip();

  GpsVariant variant_;
  Lattice lattice_;
  SiteOrdering ordering_;
  std::optional<GaugeConstraint> gauge_;
  int n_, d_, m_;
  int n_corr_, n_rows_, n_offsets_;
  std::vector<int> tri_;        // masked fully-variational row offsets
  std::vector<int> offset_of_;  // filter: n_*n_ table position pair -> offset row
  Eigen::VectorX<T> params_;
  std::vector<T> recip_;  // elementwise reciprocals (0 where a parameter is 0)
};

using GpsModelR = GpsModel<double>;
using GpsModelC = GpsModel<cplx>;

// N x D table of local amplitudes of a product state.
struct ProductStateTable {
  int n_sites = 0;
  int local_dim = 0;
  std::vector<cplx> c;  // row-major, c[site * local_dim + state]

  cplx& at(int site, int state) { return c[site * local_dim + state]; }
  cplx at(int site, int state) const { return c[site * local_dim + state]; }
  void normalize_rows();
};

enum class EmbedKind { Full, WeightSharing };

// Exact AR-GPS embedding of a product state: Full uses M=1 with
// eps_i[y,1,i] = log c^i_y and ones elsewhere; WeightSharing uses the shared
// tensor with M=N. Zero table entries map to a large negative log so the
// resulting amplitude vanishes to tolerance.
GpsModel<cplx> product_state_embed(const ProductStateTable& table, EmbedKind kind);

}  // namespace gps
