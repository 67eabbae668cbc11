#include "gpsvmc/abinitio.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gps {

namespace {

// spin-orbital bookkeeping: canonical index = spin * L + position,
// spin 0 = up, spin 1 = down
struct SpinOrbital {
  int pos;
  int spin;
  int canonical(int n) const { return spin * n + pos; }
};

std::uint8_t spin_bit(int spin) { return spin == 0 ? 1 : 2; }

}  // namespace

AbInitioIntegrals parse_fcidump(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open FCIDUMP file: " + path);

  // header: everything from &FCI to &END or a bare "/"
  std::string header;
  std::string line;
  bool header_done = false;
  std::streampos data_start;
  {
    bool started = false;
    while (std::getline(in, line)) {
      std::string upper = line;
      std::transform(upper.begin(), upper.end(), upper.begin(), ::toupper);
      if (!started) {
        if (upper.find("&FCI") == std::string::npos)
          throw std::runtime_error("FCIDUMP: missing &FCI header");
        started = true;
      }
      header += " " + upper;
      if (upper.find("&END") != std::string::npos || upper.find('/') != std::string::npos) {
        header_done = true;
        break;
      }
    }
    if (!header_done) throw std::runtime_error("FCIDUMP: unterminated header");
  }

  auto header_int = [&header](const std::string& key, int fallback, bool required) {
    auto pos = header.find(key + "=");
    if (pos == std::string::npos) {
      if (required) throw std::runtime_error("FCIDUMP: header lacks " + key);
      return fallback;
    }
    return std::stoi(header.substr(pos + key.size() + 1));
  };

  AbInitioIntegrals ints;
  ints.n_orb = header_int("NORB", 0, true);
  ints.n_elec = header_int("NELEC", -1, false);
  ints.ms2 = header_int("MS2", 0, false);
  if (ints.n_orb <= 0) throw std::runtime_error("FCIDUMP: NORB must be positive");
  const int n = ints.n_orb;
  ints.h1.assign(static_cast<std::size_t>(n) * n, 0.0);
  ints.h2.assign(static_cast<std::size_t>(n) * n * n * n, 0.0);
  std::vector<char> set1(ints.h1.size(), 0), set2(ints.h2.size(), 0);
  bool core_set = false;

  auto put1 = [&](int p, int q, double w) {
    for (auto [a, b] : {std::pair{p, q}, std::pair{q, p}}) {
      std::size_t idx = static_cast<std::size_t>(a) * n + b;
      if (set1[idx] && std::abs(ints.h1[idx] - w) > 1e-10)
        throw std::runtime_error("FCIDUMP: conflicting duplicate one-body entry");
      ints.h1[idx] = w;
      set1[idx] = 1;
    }
  };
  auto put2 = [&](int p, int q, int r, int s, double w) {
    const std::array<std::array<int, 4>, 8> images = {{{p, q, r, s},
                                                       {q, p, r, s},
                                                       {p, q, s, r},
                                                       {q, p, s, r},
                                                       {r, s, p, q},
                                                       {s, r, p, q},
                                                       {r, s, q, p},
                                                       {s, r, q, p}}};
    for (const auto& im : images) {
      std::size_t idx = ((static_cast<std::size_t>(im[0]) * n + im[1]) * n + im[2]) * n + im[3];
      if (set2[idx] && std::abs(ints.h2[idx] - w) > 1e-10)
        throw std::runtime_error("FCIDUMP: conflicting duplicate two-body entry");
      ints.h2[idx] = w;
      set2[idx] = 1;
    }
  };

  while (std::getline(in, line)) {
    // Fortran D exponents
    for (char& ch : line)
      if (ch == 'D' || ch == 'd') ch = 'E';
    std::istringstream is(line);
    double w;
    int i, j, k, l;
    if (!(is >> w >> i >> j >> k >> l)) {
      // ignore blank lines
      std::string rest;
      std::istringstream chk(line);
      if (chk >> rest) throw std::runtime_error("FCIDUMP: malformed value line: " + line);
      continue;
    }
    if (i < 0 || j < 0 || k < 0 || l < 0 || i > n || j > n || k > n || l > n)
      throw std::runtime_error("FCIDUMP: orbital index out of range");
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      if (core_set && std::abs(ints.e_core - w) > 1e-10)
        throw std::runtime_error("FCIDUMP: conflicting duplicate core energy");
      ints.e_core = w;
      core_set = true;
    } else if (k == 0 && l == 0) {
      if (i == 0 || j == 0) throw std::runtime_error("FCIDUMP: malformed one-body indices");
      put1(i - 1, j - 1, w);
    } else {
      if (i == 0 || j == 0 || k == 0 || l == 0) throw std::runtime_error("FCIDUMP: malformed two-body indices");
      put2(i - 1, j - 1, k - 1, l - 1, w);
    }
  }
  return ints;
}

AbInitioHamiltonian::AbInitioHamiltonian(AbInitioIntegrals integrals, SiteOrdering ordering, double cutoff)
    : ints_(std::move(integrals)), ordering_(std::move(ordering)), n_(ints_.n_orb), cutoff_(cutoff) {
  if (ordering_.n() != n_) throw std::invalid_argument("ordering size does not match orbital count");
}

void AbInitioHamiltonian::connected(const Configuration& x, std::vector<ConnectedTerm>& out) const {
  out.clear();

  // occupied spin-orbitals in canonical order (up block, then down block)
  std::vector<SpinOrbital> occ;
  occ.reserve(2 * n_);
  for (int spin = 0; spin < 2; ++spin)
    for (int p = 0; p < n_; ++p)
      if (x[p] & spin_bit(spin)) occ.push_back({p, spin});

  // diagonal: Slater-Condon zero-difference rule
  {
    double e = ints_.e_core;
    for (const auto& a : occ) e += ints_.one_body(orb(a.pos), orb(a.pos));
    for (std::size_t ia = 0; ia < occ.size(); ++ia)
      for (std::size_t ib = ia + 1; ib < occ.size(); ++ib) {
        const auto &a = occ[ia], &b = occ[ib];
        e += ints_.eri(orb(a.pos), orb(a.pos), orb(b.pos), orb(b.pos));
        if (a.spin == b.spin) e -= ints_.eri(orb(a.pos), orb(b.pos), orb(b.pos), orb(a.pos));
      }
    ConnectedTerm diag;
    diag.element = cplx(e, 0.0);
    out.push_back(diag);
  }

  // operational fermion phases: annihilate/create on a canonical-order
  // occupation bitmask, each picking up the parity of the set bits below
  std::vector<char> bits(2 * n_, 0);
  for (const auto& a : occ) bits[a.canonical(n_)] = 1;
  auto parity_below = [&bits](int idx) {
    int c = 0;
    for (int k = 0; k < idx; ++k) c += bits[k];
    return (c % 2 == 0) ? 1.0 : -1.0;
  };
  auto annihilate = [&](int idx) {
    const double s = parity_below(idx);
    bits[idx] = 0;
    return s;
  };
  auto create = [&](int idx) {
    const double s = parity_below(idx);
    bits[idx] = 1;
    return s;
  };
  auto restore = [&](std::initializer_list<std::pair<int, char>> saves) {
    for (auto [idx, v] : saves) bits[idx] = v;
  };

  auto emit = [&](double elem, std::initializer_list<std::pair<int, std::uint8_t>> moves) {
    // moves: (position, spin bit) pairs alternating remove/add handled by caller
    (void)moves;
    (void)elem;
  };
  (void)emit;

  auto push_term = [&](double elem, const std::vector<std::pair<int, std::uint8_t>>& removals,
                       const std::vector<std::pair<int, std::uint8_t>>& additions) {
    if (std::abs(elem) < cutoff_) return;
    // coalesce spin-orbital moves into per-position occupation changes
    std::array<int, 4> touched{};
    std::array<std::uint8_t, 4> news{};
    int nt = 0;
    auto state_of = [&](int pos) -> std::uint8_t {
      for (int k = 0; k < nt; ++k)
        if (touched[k] == pos) return news[k];
      return x[pos];
    };
    auto set_state = [&](int pos, std::uint8_t s) {
      for (int k = 0; k < nt; ++k)
        if (touched[k] == pos) {
          news[k] = s;
          return;
        }
      touched[nt] = pos;
      news[nt] = s;
      ++nt;
    };
    for (auto [pos, bit] : removals) set_state(pos, static_cast<std::uint8_t>(state_of(pos) & ~bit));
    for (auto [pos, bit] : additions) set_state(pos, static_cast<std::uint8_t>(state_of(pos) | bit));
    ConnectedTerm t;
    t.element = cplx(elem, 0.0);
    for (int k = 0; k < nt; ++k)
      if (news[k] != x[touched[k]]) t.add_change(touched[k], news[k]);
    if (t.n_changes == 0) return;  // fully cancelled move
    out.push_back(t);
  };

  // singles: spin-conserving a -> c with the one-body plus summed two-body
  // contractions of the one-difference rule
  for (const auto& a : occ) {
    for (int q = 0; q < n_; ++q) {
      if (q == a.pos || (x[q] & spin_bit(a.spin))) continue;
      double val = ints_.one_body(orb(a.pos), orb(q));
      for (const auto& b : occ) {
        if (b.pos == a.pos && b.spin == a.spin) continue;
        val += ints_.eri(orb(a.pos), orb(q), orb(b.pos), orb(b.pos));
        if (b.spin == a.spin) val -= ints_.eri(orb(a.pos), orb(b.pos), orb(b.pos), orb(q));
      }
      const int ia = a.canonical(n_);
      const int ic = SpinOrbital{q, a.spin}.canonical(n_);
      double s = annihilate(ia);
      s *= create(ic);
      restore({{ia, 1}, {ic, 0}});
      push_term(s * val, {{a.pos, spin_bit(a.spin)}}, {{q, spin_bit(a.spin)}});
    }
  }

  // doubles: occupied pair {a,b} -> virtual pair {c,d}, antisymmetrized
  // two-difference rule
  for (std::size_t ia = 0; ia < occ.size(); ++ia) {
    for (std::size_t ib = ia + 1; ib < occ.size(); ++ib) {
      const auto &a = occ[ia], &b = occ[ib];
      for (int spin_c = 0; spin_c < 2; ++spin_c) {
        for (int pc = 0; pc < n_; ++pc) {
          if (x[pc] & spin_bit(spin_c)) continue;
          const SpinOrbital c{pc, spin_c};
          for (int spin_d = spin_c; spin_d < 2; ++spin_d) {
            for (int pd = (spin_d == spin_c ? pc + 1 : 0); pd < n_; ++pd) {
              if (x[pd] & spin_bit(spin_d)) continue;
              const SpinOrbital d{pd, spin_d};
              // spin conservation of the pair
              if (a.spin + b.spin != c.spin + d.spin) continue;
              double direct = 0.0, exchange = 0.0;
              if (a.spin == c.spin && b.spin == d.spin)
                direct = ints_.eri(orb(a.pos), orb(c.pos), orb(b.pos), orb(d.pos));
              if (a.spin == d.spin && b.spin == c.spin)
                exchange = ints_.eri(orb(a.pos), orb(d.pos), orb(b.pos), orb(c.pos));
              const double val = direct - exchange;
              if (val == 0.0) continue;
              const int iA = a.canonical(n_), iB = b.canonical(n_);
              const int iC = c.canonical(n_), iD = d.canonical(n_);
              double s = annihilate(iA);
              s *= annihilate(iB);
              s *= create(iD);
              s *= create(iC);
              restore({{iA, 1}, {iB, 1}, {iC, 0}, {iD, 0}});
              push_term(s * val, {{a.pos, spin_bit(a.spin)}, {b.pos, spin_bit(b.spin)}},
                        {{c.pos, spin_bit(c.spin)}, {d.pos, spin_bit(d.spin)}});
            }
          }
        }
      }
    }
  }
}

}  // namespace gps
