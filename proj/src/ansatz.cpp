#include "gpsvmc/ansatz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace gps {

namespace {

inline double real_of(double x) { return x; }
inline double real_of(const cplx& x) { return x.real(); }

template <class T>
inline bool is_zero(const T& x) {
  return x == T(0);
}

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

template <class T>
inline T neg_inf_log() {
  if constexpr (std::is_same_v<T, double>)
    return kNegInf;
  else
    return cplx(kNegInf, 0.0);
}

// log sum_y exp(v[y]) over entries marked valid; -inf entries are skipped.
inline double logsumexp(const double* v, const bool* valid, int n) {
  double mx = kNegInf;
  for (int y = 0; y < n; ++y)
    if (valid[y] && v[y] > mx) mx = v[y];
  if (mx == kNegInf) return kNegInf;
  double s = 0.0;
  for (int y = 0; y < n; ++y)
    if (valid[y]) s += std::exp(v[y] - mx);
  return mx + std::log(s);
}

}  // namespace

void GpsVariant::validate() const {
  if (normalized && !masked)
    throw std::invalid_argument("normalized variants require masking (AR construction)");
  if (weight_sharing && !(masked && normalized && correlator == Correlator::FullyVariational))
    throw std::invalid_argument("weight sharing is only defined for the AR fully-variational form");
}

std::string GpsVariant::name() const {
  if (weight_sharing) return "ws_ar_gps";
  const bool filter = correlator == Correlator::Filter;
  if (normalized) return filter ? "ar_filter_gps" : "ar_gps";
  if (masked) return filter ? "masked_filter_gps" : "masked_gps";
  return filter ? "filter_gps" : "gps";
}

GpsVariant GpsVariant::from_name(const std::string& name) {
  if (name == "gps") return gps();
  if (name == "masked_gps") return masked_gps();
  if (name == "ar_gps") return ar_gps();
  if (name == "filter_gps") return filter_gps();
  if (name == "masked_filter_gps") return masked_filter_gps();
  if (name == "ar_filter_gps") return ar_filter_gps();
  if (name == "ws_ar_gps") return ws_ar_gps();
  throw std::invalid_argument("unknown model variant: " + name);
}

template <class T>
GpsModel<T>::GpsModel(GpsVariant variant, Lattice lattice, SiteOrdering ordering, int local_dim,
                      int support_dim, std::optional<GaugeConstraint> gauge)
    : variant_(variant),
      lattice_(std::move(lattice)),
      ordering_(std::move(ordering)),
      gauge_(std::move(gauge)),
      n_(lattice_.n_sites()),
      d_(local_dim),
      m_(support_dim) {
  variant_.validate();
  if (d_ != 2 && d_ != 4) throw std::invalid_argument("local dimension must be 2 or 4");
  if (m_ < 1) throw std::invalid_argument("support dimension must be positive");
  if (ordering_.n() != n_) throw std::invalid_argument("ordering size does not match lattice");
  if (gauge_) {
    if (!variant_.normalized)
      throw std::invalid_argument("gauge-checking blocks require a normalized (AR) variant");
    const bool spin = gauge_->kind == GaugeConstraint::Kind::SpinSz;
    if (spin != (d_ == 2)) throw std::invalid_argument("gauge constraint kind does not match local dimension");
    if (gauge_->n_up > n_ || gauge_->n_down > n_) throw std::invalid_argument("gauge targets not achievable");
  }

  n_corr_ = (variant_.correlator == Correlator::FullyVariational && !variant_.masked) ? 1 : n_;
  n_offsets_ = 0;
  if (variant_.correlator == Correlator::Filter) {
    // canonical offset order: lexicographic in the displacement vector
    std::map<std::array<int, 2>, int> index;
    offset_of_.assign(static_cast<std::size_t>(n_) * n_, -1);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        index.emplace(displacement(lattice_, ordering_.pos_to_site[i], ordering_.pos_to_site[j]), 0);
    for (auto& [disp, idx] : index) idx = n_offsets_++;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        offset_of_[static_cast<std::size_t>(i) * n_ + j] =
            index.at(displacement(lattice_, ordering_.pos_to_site[i], ordering_.pos_to_site[j]));
    n_rows_ = n_offsets_;
  } else if (variant_.masked && !variant_.weight_sharing) {
    tri_.resize(n_);
    for (int i = 0; i < n_; ++i) tri_[i] = i * (i + 1) / 2;
    n_rows_ = n_ * (n_ + 1) / 2;
  } else {
    n_rows_ = n_;
  }
  params_ = Eigen::VectorX<T>::Ones(static_cast<long>(n_rows_) * m_ * d_);
  recip_.resize(params_.size());
  refresh_recip();
}

template <class T>
int GpsModel<T>::slot_row(int i, int j) const {
  if (variant_.correlator == Correlator::Filter) return offset_of_[static_cast<std::size_t>(i) * n_ + j];
  if (variant_.masked && !variant_.weight_sharing) return tri_[i] + j;
  return j;
}

template <class T>
void GpsModel<T>::refresh_recip() {
  for (long k = 0; k < params_.size(); ++k)
    recip_[k] = is_zero(params_[k]) ? T(0) : T(1) / params_[k];
}

template <class T>
void GpsModel<T>::init_random(std::uint64_t seed, double scale) {
  if (scale < 0) throw std::invalid_argument("init scale must be non-negative");
  RandomEngine rng(seed);
  for (long k = 0; k < params_.size(); ++k) {
    if constexpr (std::is_same_v<T, double>) {
      params_[k] = 1.0 + scale * rng.normal();
    } else {
      const double re = 1.0 + scale * rng.normal();
      const double im = scale * rng.normal();
      params_[k] = cplx(re, im);
    }
  }
  refresh_recip();
}

template <class T>
Eigen::VectorXcd GpsModel<T>::parameters() const {
  return params_.template cast<cplx>();
}

template <class T>
void GpsModel<T>::set_parameters(const Eigen::VectorXcd& theta) {
  if (theta.size() != params_.size()) throw std::invalid_argument("parameter vector size mismatch");
  if constexpr (std::is_same_v<T, double>) {
    if (theta.imag().cwiseAbs().maxCoeff() != 0.0)
      throw std::invalid_argument("complex parameters assigned to a real-dtype model");
    params_ = theta.real();
  } else {
    params_ = theta;
  }
  refresh_recip();
}

template <class T>
void GpsModel<T>::set_params_typed(Eigen::VectorX<T> p) {
  if (p.size() != params_.size()) throw std::invalid_argument("parameter vector size mismatch");
  params_ = std::move(p);
  refresh_recip();
}

template <class T>
std::array<bool, 4> GpsModel<T>::feasible(int pos, const PrefixCounts& counts) const {
  if (!gauge_) return {true, true, true, true};
  return gauge_mask_counts(counts, pos, n_, d_, *gauge_);
}

template <class T>
void GpsModel<T>::conditionals_from_prefix(int i, const T* prefix, const std::array<bool, 4>& feas,
                                           T* cond_out, double* lognorm_out) const {
  const T* own = row_ptr(slot_row(i, i));
  double re2[4];
  bool valid[4];
  for (int y = 0; y < d_; ++y) {
    T c(0);
    for (int m = 0; m < m_; ++m) c += own[m * d_ + y] * prefix[m];
    cond_out[y] = c;
    re2[y] = 2.0 * real_of(c);
    valid[y] = feas[y];
  }
  if (lognorm_out) *lognorm_out = 0.5 * logsumexp(re2, valid, d_);
}

template <class T>
T GpsModel<T>::log_amplitude_t(const Configuration& x) const {
  if (gauge_ && !gauge_->satisfied(x)) return neg_inf_log<T>();
  std::vector<T> prefix(m_);
  T total(0);
  if (!variant_.masked) {
    // product over all sites for each correlator (one for the plain GPS)
    for (int c = 0; c < n_corr_; ++c) {
      std::fill(prefix.begin(), prefix.end(), T(1));
      for (int j = 0; j < n_; ++j) {
        const T* row = row_ptr(slot_row(c, j));
        for (int m = 0; m < m_; ++m) prefix[m] *= row[m * d_ + x[j]];
      }
      for (int m = 0; m < m_; ++m) total += prefix[m];
    }
    return total;
  }
  PrefixCounts counts;
  T cond[4];
  for (int i = 0; i < n_; ++i) {
    std::fill(prefix.begin(), prefix.end(), T(1));
    for (int j = 0; j < i; ++j) {
      const T* row = row_ptr(slot_row(i, j));
      for (int m = 0; m < m_; ++m) prefix[m] *= row[m * d_ + x[j]];
    }
    if (variant_.normalized) {
      double lognorm = 0.0;
      conditionals_from_prefix(i, prefix.data(), feasible(i, counts), cond, &lognorm);
      total += cond[x[i]] - T(lognorm);
      if (gauge_) counts.add(x[i], gauge_->kind);
    } else {
      const T* own = row_ptr(slot_row(i, i));
      T c(0);
      for (int m = 0; m < m_; ++m) c += own[m * d_ + x[i]] * prefix[m];
      total += c;
    }
  }
  return total;
}

template <class T>
cplx GpsModel<T>::log_amplitude(const Configuration& x) const {
  return cplx(log_amplitude_t(x));
}

template <class T>
std::array<T, 4> GpsModel<T>::conditional_logs(const Configuration& x, int pos) const {
  std::array<T, 4> out = {T(0), T(0), T(0), T(0)};
  std::vector<T> prefix(m_, T(1));
  const int corr = variant_.masked ? pos : (variant_.correlator == Correlator::Filter ? pos : 0);
  const int jend = variant_.masked ? pos : n_;
  for (int j = 0; j < jend; ++j) {
    if (j == pos) continue;  // only reachable for unmasked variants
    const T* row = row_ptr(slot_row(corr, j));
    for (int m = 0; m < m_; ++m) prefix[m] *= row[m * d_ + x[j]];
  }
  const T* own = row_ptr(slot_row(corr, pos));
  for (int y = 0; y < d_; ++y) {
    T c(0);
    for (int m = 0; m < m_; ++m) c += own[m * d_ + y] * prefix[m];
    out[y] = c;
  }
  return out;
}

template <class T>
void GpsModel<T>::build_cache(const Configuration& x, Cache& cache) const {
  if (static_cast<int>(x.size()) != n_) throw std::invalid_argument("configuration size mismatch");
  if (gauge_ && !gauge_->satisfied(x))
    throw std::invalid_argument("cannot build a cache for a configuration outside the gauge sector");
  cache.config = x;
  cache.phi.assign(static_cast<std::size_t>(n_corr_) * m_, T(1));
  cache.cond.assign(n_corr_, T(0));
  cache.lognorm.assign(variant_.normalized ? n_ : 0, 0.0);
  cache.s_phi.resize(cache.phi.size());
  cache.s_cond.resize(cache.cond.size());
  cache.s_lognorm.resize(cache.lognorm.size());
  if (gauge_) {
    cache.cum_up.assign(n_ + 1, 0);
    cache.cum_down.assign(n_ + 1, 0);
    for (int i = 0; i < n_; ++i) {
      cache.cum_up[i + 1] = cache.cum_up[i] + (has_up(x[i]) ? 1 : 0);
      cache.cum_down[i + 1] = cache.cum_down[i] + ((d_ == 4 && has_down(x[i])) ? 1 : 0);
    }
  }

  std::vector<T> prefix(m_);
  T total(0);
  T cond[4];
  for (int c = 0; c < n_corr_; ++c) {
    T* phi = cache.phi.data() + static_cast<std::size_t>(c) * m_;
    std::fill(prefix.begin(), prefix.end(), T(1));
    const int jend = env_end(c);
    for (int j = 0; j < jend; ++j) {
      if (variant_.masked && j == c) continue;  // own factor applied below
      const T* row = row_ptr(slot_row(c, j));
      for (int m = 0; m < m_; ++m) prefix[m] *= row[m * d_ + x[j]];
    }
    if (variant_.masked) {
      if (variant_.normalized) {
        PrefixCounts counts;
        if (gauge_) counts = PrefixCounts{cache.cum_up[c], cache.cum_down[c]};
        double lognorm = 0.0;
        conditionals_from_prefix(c, prefix.data(), feasible(c, counts), cond, &lognorm);
        cache.lognorm[c] = lognorm;
        total -= T(lognorm);
      }
      const T* own = row_ptr(slot_row(c, c));
      for (int m = 0; m < m_; ++m) phi[m] = prefix[m] * own[m * d_ + x[c]];
    } else {
      for (int m = 0; m < m_; ++m) phi[m] = prefix[m];
    }
    T csum(0);
    for (int m = 0; m < m_; ++m) csum += phi[m];
    cache.cond[c] = csum;
    total += csum;
  }
  cache.log_amp_t = total;
  cache.log_amp = cplx(total);
}

template <class T>
std::unique_ptr<AmplitudeCacheBase> GpsModel<T>::make_cache(const Configuration& x) const {
  auto cache = std::make_unique<Cache>();
  build_cache(x, *cache);
  return cache;
}

template <class T>
void GpsModel<T>::rebuild_config(const Configuration& base, std::span<const SiteChange> changes,
                                 Configuration& out) const {
  out = base;
  for (const SiteChange& ch : changes) out[ch.site] = ch.state;
}

template <class T>
T GpsModel<T>::peek_t(Cache& cache, std::span<const SiteChange> changes) const {
  if (changes.empty()) throw std::invalid_argument("fast update requires at least one change");
  cache.s_fallback = false;
  cache.s_rows.clear();

  int k_min = n_;
  for (const SiteChange& ch : changes) k_min = std::min(k_min, ch.site);
  const bool masked = variant_.masked;
  const int row_begin = masked ? k_min : 0;
  const int row_end = n_corr_;

  T delta(0);
  PrefixCounts shift;  // accumulated count change from modified positions < current row
  std::size_t next_change_for_counts = 0;
  // rows ascending so gauge count shifts can be folded in change by change
  std::vector<SiteChange> sorted(changes.begin(), changes.end());
  std::sort(sorted.begin(), sorted.end(), [](const SiteChange& a, const SiteChange& b) { return a.site < b.site; });

  for (int r = row_begin; r < row_end; ++r) {
    bool env_changed_below_own = false;
    std::uint8_t own_state = cache.config[r];
    T* sphi = cache.s_phi.data() + static_cast<std::size_t>(r) * m_;
    const T* phi = cache.phi.data() + static_cast<std::size_t>(r) * m_;
    std::copy(phi, phi + m_, sphi);
    for (const SiteChange& ch : changes) {
      const int k = ch.site;
      if (masked && k > r) continue;
      if (masked && k < r) env_changed_below_own = true;
      if (masked && k == r) own_state = ch.state;
      const T* row = row_ptr(slot_row(r, k));
      const T* rrow = recip_.data() + static_cast<std::size_t>(slot_row(r, k)) * m_ * d_;
      const std::uint8_t old_state = cache.config[k];
      for (int m = 0; m < m_; ++m) {
        if (is_zero(row[m * d_ + old_state])) {
          cache.s_fallback = true;
          break;
        }
        sphi[m] *= row[m * d_ + ch.state] * rrow[m * d_ + old_state];
      }
      if (cache.s_fallback) break;
    }
    if (cache.s_fallback) break;
    cache.s_rows.push_back(r);
    T csum(0);
    for (int m = 0; m < m_; ++m) csum += sphi[m];
    cache.s_cond[r] = csum;
    delta += csum - cache.cond[r];

    if (variant_.normalized) {
      double new_lognorm = cache.lognorm[r];
      if (env_changed_below_own) {
        // divide out the own-site factor to recover the prefix products
        const int own_row = slot_row(r, r);
        const T* orow = row_ptr(own_row);
        const T* orecip = recip_.data() + static_cast<std::size_t>(own_row) * m_ * d_;
        std::vector<T> prefix(m_);
        for (int m = 0; m < m_; ++m) {
          if (is_zero(orow[m * d_ + own_state])) {
            cache.s_fallback = true;
            break;
          }
          prefix[m] = sphi[m] * orecip[m * d_ + own_state];
        }
        if (cache.s_fallback) break;
        PrefixCounts counts;
        if (gauge_) {
          while (next_change_for_counts < sorted.size() && sorted[next_change_for_counts].site < r) {
            const SiteChange& ch = sorted[next_change_for_counts];
            const std::uint8_t olds = cache.config[ch.site];
            auto units = [this](std::uint8_t s) {
              if (d_ == 2) return std::pair<int, int>(s == 1 ? 1 : 0, 0);
              return std::pair<int, int>(has_up(s) ? 1 : 0, has_down(s) ? 1 : 0);
            };
            auto [ou, od] = units(olds);
            auto [nu, nd] = units(ch.state);
            shift.up += nu - ou;
            shift.down += nd - od;
            ++next_change_for_counts;
          }
          counts = PrefixCounts{cache.cum_up[r] + shift.up, cache.cum_down[r] + shift.down};
        }
        T cond[4];
        conditionals_from_prefix(r, prefix.data(), feasible(r, counts), cond, &new_lognorm);
      }
      cache.s_lognorm[r] = new_lognorm;
      delta -= T(new_lognorm - cache.lognorm[r]);
    }
  }

  if (cache.s_fallback) {
    Configuration modified;
    rebuild_config(cache.config, changes, modified);
    cache.s_log_amp = log_amplitude_t(modified);
  } else {
    cache.s_log_amp = cache.log_amp_t + delta;
  }
  return cache.s_log_amp;
}

template <class T>
void GpsModel<T>::commit_t(Cache& cache, std::span<const SiteChange> changes) const {
  peek_t(cache, changes);
  if (cache.s_fallback) {
    Configuration modified;
    rebuild_config(cache.config, changes, modified);
    ++cache.rebuild_count;
    const long rebuilds = cache.rebuild_count;
    build_cache(modified, cache);
    cache.rebuild_count = rebuilds;
    return;
  }
  for (int r : cache.s_rows) {
    std::copy(cache.s_phi.begin() + static_cast<std::size_t>(r) * m_,
              cache.s_phi.begin() + static_cast<std::size_t>(r + 1) * m_,
              cache.phi.begin() + static_cast<std::size_t>(r) * m_);
    cache.cond[r] = cache.s_cond[r];
    if (variant_.normalized) cache.lognorm[r] = cache.s_lognorm[r];
  }
  for (const SiteChange& ch : changes) cache.config[ch.site] = ch.state;
  if (gauge_) {
    for (int i = 0; i < n_; ++i) {
      const std::uint8_t s = cache.config[i];
      cache.cum_up[i + 1] = cache.cum_up[i] + (has_up(s) ? 1 : 0);
      cache.cum_down[i + 1] = cache.cum_down[i] + ((d_ == 4 && has_down(s)) ? 1 : 0);
    }
  }
  cache.log_amp_t = cache.s_log_amp;
  cache.log_amp = cplx(cache.log_amp_t);
}

template <class T>
cplx GpsModel<T>::peek_update(AmplitudeCacheBase& cache, std::span<const SiteChange> changes) const {
  return cplx(peek_t(static_cast<Cache&>(cache), changes));
}

template <class T>
void GpsModel<T>::commit_update(AmplitudeCacheBase& cache, std::span<const SiteChange> changes) const {
  commit_t(static_cast<Cache&>(cache), changes);
}

template <class T>
void GpsModel<T>::log_derivatives_t(const Configuration& x, T* out) const {
  std::fill(out, out + params_.size(), T(0));
  // Wirtinger derivative of the normalizer carries 1/2 for complex
  // parameters; the real-parameter derivative carries the full weight.
  const double w = std::is_same_v<T, double> ? 1.0 : 0.5;

  std::vector<T> fac(static_cast<std::size_t>(n_) * m_);  // env factor values
  std::vector<T> pre(static_cast<std::size_t>(n_ + 1) * m_), suf(static_cast<std::size_t>(n_ + 1) * m_);
  std::vector<T> amul(m_);
  std::vector<int> env;
  env.reserve(n_);
  PrefixCounts counts;

  for (int c = 0; c < n_corr_; ++c) {
    const bool norm = variant_.normalized;
    const int jend = env_end(c);
    // env list: all factor positions of this correlator except, for
    // normalized variants, the own site (handled via candidates)
    int len = 0;
    env.clear();
    for (int j = 0; j < jend; ++j) {
      if (norm && j == c) continue;
      env.push_back(j);
      const T* row = row_ptr(slot_row(c, j));
      for (int m = 0; m < m_; ++m) fac[static_cast<std::size_t>(len) * m_ + m] = row[m * d_ + x[j]];
      ++len;
    }
    for (int m = 0; m < m_; ++m) pre[m] = T(1);
    for (int e = 0; e < len; ++e)
      for (int m = 0; m < m_; ++m)
        pre[static_cast<std::size_t>(e + 1) * m_ + m] =
            pre[static_cast<std::size_t>(e) * m_ + m] * fac[static_cast<std::size_t>(e) * m_ + m];
    for (int m = 0; m < m_; ++m) suf[static_cast<std::size_t>(len) * m_ + m] = T(1);
    for (int e = len - 1; e >= 0; --e)
      for (int m = 0; m < m_; ++m)
        suf[static_cast<std::size_t>(e) * m_ + m] =
            suf[static_cast<std::size_t>(e + 1) * m_ + m] * fac[static_cast<std::size_t>(e) * m_ + m];

    if (!norm) {
      // d/d eps[slot(c,j), m, x_j] = product of the other factors
      for (int e = 0; e < len; ++e) {
        const int j = env[e];
        T* dst = out + static_cast<std::size_t>(slot_row(c, j)) * m_ * d_;
        for (int m = 0; m < m_; ++m)
          dst[m * d_ + x[j]] += pre[static_cast<std::size_t>(e) * m_ + m] * suf[static_cast<std::size_t>(e + 1) * m_ + m];
      }
      continue;
    }

    // normalized correlator: q(y) are the conditional probabilities over the
    // gauge-feasible candidates
    const T* prefix = pre.data() + static_cast<std::size_t>(len) * m_;
    const auto feas = feasible(c, counts);
    const T* own = row_ptr(slot_row(c, c));
    T cond[4];
    double re2[4];
    bool valid[4];
    for (int y = 0; y < d_; ++y) {
      T v(0);
      for (int m = 0; m < m_; ++m) v += own[m * d_ + y] * prefix[m];
      cond[y] = v;
      re2[y] = 2.0 * real_of(v);
      valid[y] = feas[y];
    }
    const double z = logsumexp(re2, valid, d_);
    double q[4] = {0, 0, 0, 0};
    for (int y = 0; y < d_; ++y)
      if (valid[y]) q[y] = std::exp(re2[y] - z);

    T* own_dst = out + static_cast<std::size_t>(slot_row(c, c)) * m_ * d_;
    for (int m = 0; m < m_; ++m) {
      T qo(0);
      for (int y = 0; y < d_; ++y)
        if (valid[y]) qo += T(q[y]) * own[m * d_ + y];
      amul[m] = own[m * d_ + x[c]] - T(w) * qo;
      for (int y = 0; y < d_; ++y) {
        T g = (y == x[c]) ? T(1) : T(0);
        g -= T(w * q[y]);
        own_dst[m * d_ + y] += g * prefix[m];
      }
    }
    for (int e = 0; e < len; ++e) {
      const int j = env[e];
      T* dst = out + static_cast<std::size_t>(slot_row(c, j)) * m_ * d_;
      for (int m = 0; m < m_; ++m)
        dst[m * d_ + x[j]] +=
            amul[m] * pre[static_cast<std::size_t>(e) * m_ + m] * suf[static_cast<std::size_t>(e + 1) * m_ + m];
    }
    if (gauge_) counts.add(x[c], gauge_->kind);
  }
}

template <class T>
Eigen::VectorXcd GpsModel<T>::log_derivatives(const Configuration& x) const {
  Eigen::VectorX<T> d(params_.size());
  log_derivatives_t(x, d.data());
  return d.template cast<cplx>();
}

template <class T>
Sample GpsModel<T>::sample(RandomEngine& rng) const {
  if (!variant_.normalized) throw std::runtime_error("direct sampling is undefined for unnormalized variants");
  Sample s;
  s.x.assign(n_, 0);
  s.log_prob = 0.0;
  T log_amp(0);
  PrefixCounts counts;
  std::vector<T> prefix(m_);
  T cond[4];
  double re2[4], p[4];
  for (int i = 0; i < n_; ++i) {
    std::fill(prefix.begin(), prefix.end(), T(1));
    for (int j = 0; j < i; ++j) {
      const T* row = row_ptr(slot_row(i, j));
      for (int m = 0; m < m_; ++m) prefix[m] *= row[m * d_ + s.x[j]];
    }
    const auto feas = feasible(i, counts);
    const T* own = row_ptr(slot_row(i, i));
    bool valid[4];
    for (int y = 0; y < d_; ++y) {
      T v(0);
      for (int m = 0; m < m_; ++m) v += own[m * d_ + y] * prefix[m];
      cond[y] = v;
      re2[y] = 2.0 * real_of(v);
      valid[y] = feas[y];
    }
    const double z = logsumexp(re2, valid, d_);
    double cum = 0.0;
    for (int y = 0; y < d_; ++y) {
      p[y] = valid[y] ? std::exp(re2[y] - z) : 0.0;
      cum += p[y];
    }
    const double u = rng.uniform() * cum;  // cum == 1 up to rounding
    double acc = 0.0;
    int pick = d_ - 1;
    for (int y = 0; y < d_; ++y) {
      acc += p[y];
      if (u < acc) {
        pick = y;
        break;
      }
    }
    while (!valid[pick]) --pick;  // guard against rounding at the upper edge
    s.x[i] = static_cast<std::uint8_t>(pick);
    s.log_prob += re2[pick] - z;
    log_amp += cond[pick] - T(0.5 * z);
    if (gauge_) counts.add(s.x[i], gauge_->kind);
  }
  s.log_amp = cplx(log_amp);
  return s;
}

template class GpsModel<double>;
template class GpsModel<cplx>;

void ProductStateTable::normalize_rows() {
  for (int i = 0; i < n_sites; ++i) {
    double nrm = 0.0;
    for (int y = 0; y < local_dim; ++y) nrm += std::norm(at(i, y));
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) throw std::invalid_argument("product state row has zero norm");
    for (int y = 0; y < local_dim; ++y) at(i, y) /= nrm;
  }
}

GpsModel<cplx> product_state_embed(const ProductStateTable& table, EmbedKind kind) {
  const int n = table.n_sites;
  const int d = table.local_dim;
  double max_abs_log = 1.0;
  bool any_nonzero = false;
  for (const cplx& c : table.c) {
    if (c != cplx(0)) {
      any_nonzero = true;
      max_abs_log = std::max(max_abs_log, std::abs(std::log(c)));
    }
  }
  if (!any_nonzero) throw std::invalid_argument("product state table is identically zero");
  const double big = 100.0 * max_abs_log;
  auto safe_log = [&](const cplx& c) { return c == cplx(0) ? cplx(-big, 0.0) : std::log(c); };

  const Lattice lat = Lattice::chain(n, Boundary::Open);
  const SiteOrdering ord = SiteOrdering::identity(n);
  if (kind == EmbedKind::Full) {
    GpsModel<cplx> model(GpsVariant::ar_gps(), lat, ord, d, 1);
    Eigen::VectorXcd p = Eigen::VectorXcd::Ones(model.n_params());
    for (int i = 0; i < n; ++i)
      for (int y = 0; y < d; ++y) p[model.param_index(model.slot_row(i, i), 0, y)] = safe_log(table.at(i, y));
    model.set_parameters(p);
    return model;
  }
  GpsModel<cplx> model(GpsVariant::ws_ar_gps(), lat, ord, d, n);
  Eigen::VectorXcd p = Eigen::VectorXcd::Zero(model.n_params());
  for (int j = 0; j < n; ++j)
    for (int m = 0; m < n; ++m)
      for (int y = 0; y < d; ++y) {
        cplx v(0);
        if (j == m)
          v = safe_log(table.at(j, y));
        else if (j < m)
          v = cplx(1, 0);
        p[model.param_index(model.slot_row(0, j), m, y)] = v;
      }
  model.set_parameters(p);
  return model;
}

}  // namespace gps
