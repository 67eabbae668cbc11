#include "gpsvmc/gauge.hpp"

#include <stdexcept>

namespace gps {

std::array<bool, 4> gauge_mask_counts(const PrefixCounts& counts, int position, int n_sites,
                                      int local_dim, const GaugeConstraint& g) {
  std::array<bool, 4> mask = {false, false, false, false};
  const int remaining_after = n_sites - position - 1;
  bool any = false;
  for (int s = 0; s < local_dim; ++s) {
    int du = 0, dd = 0;
    if (g.kind == GaugeConstraint::Kind::SpinSz) {
      du = (s == 1);
    } else {
      du = has_up(static_cast<std::uint8_t>(s)) ? 1 : 0;
      dd = has_down(static_cast<std::uint8_t>(s)) ? 1 : 0;
    }
    const int up = counts.up + du;
    bool ok = up <= g.n_up && g.n_up - up <= remaining_after;
    if (g.kind == GaugeConstraint::Kind::ElectronNumber) {
      const int down = counts.down + dd;
      ok = ok && down <= g.n_down && g.n_down - down <= remaining_after;
    }
    mask[s] = ok;
    any = any || ok;
  }
  if (!any) throw std::runtime_error("gauge mask: infeasible prefix");
  return mask;
}

std::array<bool, 4> gauge_mask(const Configuration& x_prefix, int position, int n_sites,
                               int local_dim, const GaugeConstraint& g) {
  PrefixCounts c;
  for (int j = 0; j < position; ++j) c.add(x_prefix[j], g.kind);
  return gauge_mask_counts(c, position, n_sites, local_dim, g);
}

}  // namespace gps
