#pragma once

// Densities of primes whose order of reduction satisfies a divisibility
// condition: closed rational formulas over the finite degree table and
// truncated series with certified tails.

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "divord/arith.hpp"
#include "divord/kummer.hpp"

namespace divord {

struct ScaledConstant {
  Rat q;                    // the density is q * A_{k,r}
  int k = 2;
  int r = 1;
  long double approx = 0;   // q * (truncated Euler product)
  long double error = 0;    // bound on |approx - q * A_{k,r}|
};

struct DensityValue {
  std::optional<Rat> exact;
  std::optional<std::pair<Rat, Rat>> interval;
  std::optional<ScaledConstant> scaled;

  static DensityValue of_exact(Rat v) {
    DensityValue d;
    d.exact = std::move(v);
    return d;
  }
  static DensityValue of_interval(Rat lo, Rat hi) {
    DensityValue d;
    d.interval = std::make_pair(std::move(lo), std::move(hi));
    return d;
  }
  Rat width() const { return interval ? interval->second - interval->first : Rat(0); }
  bool contains(const Rat& v) const { return interval && interval->first <= v && v <= interval->second; }
  long double approx() const {
    if (exact) return to_long_double(*exact);
    if (scaled) return scaled->approx;
    if (interval) return to_long_double((interval->first + interval->second) / 2);
    return 0;
  }
};

// ---------------------------------------------------------------------------
// Frobenius conditions

struct FrobTrivial {};
/// C = {id}: primes splitting completely in F; `table_over_F` describes G over F.
struct FrobSplitCompletely {
  u64 degree_FK = 1;
  DegreeTable table_over_F;
};
/// F linearly disjoint from every K_{m,n} over K.
struct FrobLinearlyDisjoint {
  u64 size_C = 1;
  u64 degree_FK = 1;
};
/// Caller-supplied c(a,b) and [F_{a,b}:K].
struct FrobOracle {
  std::function<u64(u64, u64)> coeff;
  std::function<BigInt(u64, u64)> degree_F;
  u64 cap = 1;
};
using FrobeniusSpec = std::variant<FrobTrivial, FrobSplitCompletely, FrobLinearlyDisjoint, FrobOracle>;

/// Scales a density computed with the mode's own degree table.
inline DensityValue apply_frobenius_mode(const DensityValue& base, const FrobeniusSpec& frob) {
  Rat factor = 1;
  if (std::holds_alternative<FrobTrivial>(frob)) return base;
  if (auto* sc = std::get_if<FrobSplitCompletely>(&frob)) {
    factor = Rat(1, sc->degree_FK);
  } else if (auto* ld = std::get_if<FrobLinearlyDisjoint>(&frob)) {
    if (ld->size_C > ld->degree_FK) throw std::domain_error("|C| exceeds [F:K]");
    factor = Rat(ld->size_C, ld->degree_FK);
  } else {
    throw std::domain_error("apply_frobenius_mode: Oracle mode is evaluated through rho_series only");
  }
  DensityValue out = base;
  if (out.exact) *out.exact *= factor;
  if (out.interval) {
    out.interval->first *= factor;
    out.interval->second *= factor;
  }
  if (out.scaled) {
    out.scaled->q *= factor;
    out.scaled->approx *= to_long_double(factor);
    out.scaled->error *= to_long_double(factor);
  }
  return out;
}

/// Torsion: m | ord(G x <zeta_t>) iff m' | ord(G) with m' below.
inline u64 torsion_reduce(u64 m, u64 t) {
  u64 out = 1;
  for (auto [ell, e] : factorize_u64(m).factors)
    if (e > valuation(t, ell)) out *= ipow(ell, static_cast<unsigned>(e));
  return out;
}

namespace detail {

inline Rat ell_pow(u64 ell, long long e) { return rat_pow(Rat(ell), static_cast<int>(e)); }

/// C(g,h) = phi(g) h^r / [K_{g,h}:K].
inline Rat defect(const DegreeTable& t, u64 g, u64 h) {
  return Rat(BigInt(euler_phi(g)) * big_pow(BigInt(h), static_cast<unsigned>(t.rank)), t.at(g, h));
}

// Local factor of the divisibility density at ell | g (valuations m, z, g, h of ell).
inline Rat rho_local(u64 ell, int r, int m, int z, int g, int h) {
  if (h == 0) return std::min(m, z) == g ? Rat(1) : Rat(0);
  const Rat w = ell_pow(ell, -static_cast<long long>(h) * (r + 1));
  const Rat L(ell);
  const Rat Lr1 = ell_pow(ell, r + 1);
  if (g < z) {
    if (g == m + h) return w;
    if (g == m + h - 1) return -L * w;
    return 0;
  }
  if (h < g) {
    if (m + h - 1 >= z) return -(L - 1) * w;
    if (m + h == z) return w;
    return 0;
  }
  return -w * Lr1 * (L - 1) / (Lr1 - 1);
}

// Local factor of the k-free density at ell | g.
inline Rat beta_local(u64 ell, int r, int k, int z, int g, int h) {
  const Rat L(ell);
  const Rat phik = (L - 1) * ell_pow(ell, k - 1);
  if (h == 0) return g == std::min(k, z) ? Rat(-1) / phik : Rat(0);
  const Rat w = ell_pow(ell, -static_cast<long long>(h) * (r + 1)) / phik;
  const Rat Lr1 = ell_pow(ell, r + 1);
  const int d = g - h;
  if (h == z) return w * Lr1 * (L - 1) / (Lr1 - 1);
  if (g == z) {
    if (d > k) return 0;
    if (d == k) return -w;
    return (L - 1) * w;
  }
  if (d == k) return -w;
  if (d == k - 1) return L * w;
  return 0;
}

// Local factor of the valuation density at ell | g, where a = v_ell(m).
inline Rat gamma_local(u64 ell, int r, int a, int z, int g, int h) {
  const Rat L(ell);
  const Rat w = ell_pow(ell, -static_cast<long long>(h) * (r + 1));
  const Rat Lr1 = ell_pow(ell, r + 1);
  const int d = g - h;
  if (a == 0) {
    if (h == 0) return g == 1 ? Rat(-1) / (L - 1) : Rat(0);
    if (h == z) return w * Lr1 / (Lr1 - 1);
    if (g == z) return d == 1 ? -w / (L - 1) : Rat(0);
    if (d == 1) return -w / (L - 1);
    if (d == 0) return L * w / (L - 1);
    return 0;
  }
  if (h == 0) {
    if (g == a && a < z) return 1;
    if (g == a + 1) return Rat(-1) / L;
    if (g == z && z <= a) return 1 - Rat(1) / L;
    return 0;
  }
  if (h == z) return -ell_pow(ell, r) * (L - 1) * (L - 1) * w / (Lr1 - 1);
  if (g == z) {
    if (d < a) return -(L - 1) * (L - 1) * w / L;
    if (d == a) return (2 * L - 1) * w / L;
    if (d == a + 1) return -w / L;
    return 0;
  }
  if (d == a - 1) return -L * w;
  if (d == a) return 2 * w;
  if (d == a + 1) return -w / L;
  return 0;
}

inline Rat x_ell(u64 ell, int k, int r) {
  const Rat L(ell);
  return (ell_pow(ell, r) - 1) / ((L - 1) * (ell_pow(ell, r + 1) - 1) * ell_pow(ell, k - 2));
}

inline bool is_k_free(u64 n, int k) {
  for (auto [p, e] : factorize_u64(n).factors)
    if (e >= k) return false;
  return true;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Divisibility: m | ord

/// Closed formula for the density of m | ord over the torsion-free part of G.
inline Rat rho_closed_free(u64 m, const DegreeTable& t) {
  if (m == 0) throw std::domain_error("rho_closed: m must be >= 1");
  const int r = t.rank;
  const u64 mz = std::gcd(m, t.z);
  const FactoredInt fm = factorize_u64(m), fz = factorize_u64(t.z);
  Rat lead = Rat(1, euler_phi(fm));
  for (auto [ell, e] : fm.factors) {
    if (fz.exponent(ell) != 0) continue;
    lead *= Rat(ell) * (detail::ell_pow(ell, r) - 1) / (detail::ell_pow(ell, r + 1) - 1);
  }
  const u64 rad_mz = radical(mz);
  Rat sum = 0;
  for (u64 g : divisors(fz)) {
    if (g % mz != 0 || rad_mz % radical(g) != 0) continue;
    const FactoredInt fg = factorize_u64(g);
    for (u64 h : divisors(fg)) {
      Rat term = detail::defect(t, g, h);
      for (auto [ell, ge] : fg.factors) {
        term *= detail::rho_local(ell, r, fm.exponent(ell), fz.exponent(ell), ge, valuation(h, ell));
        if (term == 0) break;
      }
      sum += term;
    }
  }
  return lead * sum;
}

/// Density of m | ord(G); torsion of order t is removed first.
inline DensityValue rho_closed(u64 m, const DegreeTable& t) {
  return DensityValue::of_exact(rho_closed_free(torsion_reduce(m, t.torsion), t));
}

/// Sum over n | m^inf of 1/[K_{mn,n}:K], exact, by grouping n by (mn, z) and (n, z).
inline Rat rho_majorant_total(u64 m, const DegreeTable& t) {
  const int r = t.rank;
  const FactoredInt fm = factorize_u64(m), fz = factorize_u64(t.z);
  struct Choice {
    u64 g_part, h_part;
    Rat weight;
  };
  std::vector<std::vector<Choice>> per_prime;
  for (auto [ell, me] : fm.factors) {
    const int ze = fz.exponent(ell);
    std::vector<Choice> opts;
    const Rat step = detail::ell_pow(ell, -(r + 1));
    for (int kk = 0; kk < ze; ++kk) {
      opts.push_back({ipow(ell, static_cast<unsigned>(std::min(me + kk, ze))), ipow(ell, static_cast<unsigned>(kk)),
                      detail::ell_pow(ell, -static_cast<long long>(kk) * (r + 1))});
    }
    // every kk >= ze saturates both valuations
    opts.push_back({ipow(ell, static_cast<unsigned>(ze)), ipow(ell, static_cast<unsigned>(ze)),
                    detail::ell_pow(ell, -static_cast<long long>(ze) * (r + 1)) / (1 - step)});
    per_prime.push_back(std::move(opts));
  }
  Rat total = 0;
  std::vector<std::size_t> idx(per_prime.size(), 0);
  for (;;) {
    u64 g = 1, h = 1;
    Rat w = 1;
    for (std::size_t i = 0; i < per_prime.size(); ++i) {
      g *= per_prime[i][idx[i]].g_part;
      h *= per_prime[i][idx[i]].h_part;
      w *= per_prime[i][idx[i]].weight;
    }
    total += w * detail::defect(t, g, h);
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == per_prime[i].size()) idx[i++] = 0;
    if (i == idx.size()) break;
  }
  return total / euler_phi(fm);
}

/// Truncated density series for m | ord with certified tail:
/// [S, S + T] where S sums n | m^inf with mn <= B and T bounds the rest.
inline DensityValue rho_series(u64 m, const DegreeTable& t, const FrobeniusSpec& frob = FrobTrivial{}, u64 B = 0) {
  if (m == 0) throw std::domain_error("rho_series: m must be >= 1");
  const u64 m_eff = std::holds_alternative<FrobTrivial>(frob) ? torsion_reduce(m, t.torsion) : m;
  if (m_eff == 1 && std::holds_alternative<FrobTrivial>(frob)) return DensityValue::of_interval(1, 1);
  if (B == 0) B = m_eff * (u64{1} << 14);
  if (B < m_eff) throw std::domain_error("rho_series: need B >= m");

  const DegreeTable* deg_table = &t;
  Rat scale = 1;
  if (auto* sc = std::get_if<FrobSplitCompletely>(&frob)) {
    deg_table = &sc->table_over_F;
    scale = Rat(1, sc->degree_FK);
  } else if (auto* ld = std::get_if<FrobLinearlyDisjoint>(&frob)) {
    scale = Rat(ld->size_C, ld->degree_FK);
  }
  const auto* oracle = std::get_if<FrobOracle>(&frob);

  const auto mdivs = divisors(m_eff);
  Rat partial = 0, majorant_partial = 0;
  for (u64 n : smooth_divisors(m_eff, B / m_eff)) {
    Rat term = 0;
    for (u64 d : mdivs) {
      int mu = mobius(d);
      if (mu == 0) continue;
      if (oracle) {
        u64 c = oracle->coeff(m_eff * n, d * n);
        if (c > oracle->cap) throw std::domain_error("oracle coefficient exceeds the cap");
        term += Rat(mu * static_cast<long long>(c)) / Rat(oracle->degree_F(m_eff * n, d * n));
      } else {
        term += Rat(mu) / Rat(lift_degree(*deg_table, m_eff * n, d * n));
      }
    }
    partial += term;
    majorant_partial += Rat(1) / Rat(lift_degree(oracle ? t : *deg_table, m_eff * n, n));
  }
  Rat tail = rho_majorant_total(m_eff, oracle ? t : *deg_table) - majorant_partial;
  if (oracle) return DensityValue::of_interval(partial, partial + tail);
  return DensityValue::of_interval(scale * partial, scale * (partial + tail));
}

/// Doubles the truncation bound until the interval is narrower than `width`.
inline DensityValue rho_series_to_width(u64 m, const DegreeTable& t, const Rat& width, const FrobeniusSpec& frob = FrobTrivial{}) {
  u64 mm = std::max<u64>(torsion_reduce(m, t.torsion), 1);
  u64 B = mm * 16;
  for (;;) {
    DensityValue v = rho_series(m, t, frob, B);
    if (v.width() < width || B > (u64{1} << 50)) return v;
    B *= 2;
  }
}

// ---------------------------------------------------------------------------
// The Euler product A_{k,r}

struct ConstantApprox {
  long double value = 0;
  long double error = 0;
};

inline const std::vector<std::uint32_t>& primes_below(std::uint32_t limit) {
  static std::map<std::uint32_t, std::vector<std::uint32_t>> cache;
  auto it = cache.find(limit);
  if (it != cache.end()) return it->second;
  std::vector<bool> composite(limit, false);
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 2; i < limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (u64 j = u64{i} * i; j < limit; j += i) composite[j] = true;
  }
  return cache.emplace(limit, std::move(out)).first->second;
}

/// Product over primes ell < L of (1 - x_ell) and a bound on the distance to
/// the full product, from sum_{n >= L} 1/((n-1) n^(k-1)) <= 1/((k-1)(L-2)^(k-1)).
inline ConstantApprox A_constant(int k, int r, std::uint32_t L = 100000) {
  if (k < 2) throw std::domain_error("A_constant: k must be >= 2");
  if (r < 1) throw std::domain_error("A_constant: r must be >= 1");
  if (L < 100) throw std::domain_error("A_constant: L must be >= 100");
  long double prod = 1;
  for (std::uint32_t ell : primes_below(L)) {
    long double l = ell;
    long double lr = std::pow(l, static_cast<long double>(r));
    long double x = (lr - 1) / ((l - 1) * (lr * l - 1) * std::pow(l, static_cast<long double>(k - 2)));
    prod *= 1 - x;
  }
  long double tail = 1 / ((k - 1) * std::pow(static_cast<long double>(L) - 2, static_cast<long double>(k - 1)));
  // the remaining factors lie in [1 - y, 1] with y the tail sum; the product shrinks by at most y/(1-y)
  long double err = prod * tail / (1 - tail);
  return {prod, err};
}

// ---------------------------------------------------------------------------
// k-free order

/// Rational q with beta_k = q * A_{k,r} for the torsion-free part.
inline Rat beta_multiplier_free(int k, const DegreeTable& t) {
  if (k < 2) throw std::domain_error("beta: k must be >= 2");
  const int r = t.rank;
  const FactoredInt fz = factorize_u64(t.z);
  Rat correction = 1;
  for (auto [ell, e] : fz.factors) correction /= 1 - detail::x_ell(ell, k, r);
  Rat sum = 0;
  for (u64 g : divisors(fz)) {
    const FactoredInt fg = factorize_u64(g);
    bool ok = true;
    for (auto [ell, ge] : fg.factors)
      if (ge < std::min(k, fz.exponent(ell))) ok = false;
    if (!ok) continue;
    for (u64 h : divisors(fg)) {
      Rat term = detail::defect(t, g, h);
      for (auto [ell, ge] : fg.factors) {
        term *= detail::beta_local(ell, r, k, fz.exponent(ell), ge, valuation(h, ell));
        if (term == 0) break;
      }
      sum += term;
    }
  }
  return correction * sum;
}

inline DensityValue beta_closed(int k, const DegreeTable& t, std::uint32_t L = 100000) {
  if (k < 2) throw std::domain_error("beta_closed: k must be >= 2");
  if (L < 1000) throw std::domain_error("beta_closed: L must be >= 1000");
  ScaledConstant s;
  s.k = k;
  s.r = t.rank;
  s.q = detail::is_k_free(t.torsion, k) ? beta_multiplier_free(k, t) : Rat(0);
  auto a = A_constant(k, t.rank, L);
  long double q = to_long_double(s.q);
  s.approx = q * a.value;
  s.error = std::fabs(q) * a.error;
  DensityValue v;
  v.scaled = s;
  if (s.q == 0) v.exact = Rat(0);
  return v;
}

namespace detail {

// Rational upper bound for ell^(j/4) (j >= 0) via integer square roots.
inline Rat quarter_power_upper(u64 ell, int j) {
  const BigInt scale = big_pow(BigInt(10), 12);
  Rat out = rat_pow(Rat(ell), j / 4);
  int rem = j % 4;
  if (rem == 0) return out;
  // s2 >= sqrt(ell), s4 >= ell^(1/4)
  BigInt s2n = boost::multiprecision::sqrt(BigInt(ell) * scale * scale) + 1;
  Rat s2(s2n, scale);
  BigInt s4n = boost::multiprecision::sqrt(s2n * scale) + 1;
  Rat s4(s4n, scale);
  if (rem == 1) return out * s4;
  if (rem == 2) return out * s2;
  return out * s2 * s4;
}

// Rational lower bound for n^(j/4).
inline Rat quarter_power_lower(u64 n, int j) {
  const BigInt scale = big_pow(BigInt(10), 12);
  Rat out = rat_pow(Rat(n), j / 4);
  int rem = j % 4;
  if (rem == 0) return out;
  BigInt s2n = boost::multiprecision::sqrt(BigInt(BigInt(n) * scale * scale));
  Rat s2(s2n, scale);
  BigInt s4n = boost::multiprecision::sqrt(BigInt(s2n * scale));
  Rat s4(s4n, scale);
  if (rem == 1) return out * s4;
  if (rem == 2) return out * s2;
  return out * s2 * s4;
}

}  // namespace detail

/// Rational upper bound for sum over squarefree m > M of rho_{m^k}, using
/// rho_{m^k} <= maxC / phi(m^k) * prod_{ell | m} ell^(r+1)/(ell^(r+1)-1) and
/// Rankin's trick with exponent sigma = j/4.
inline Rat beta_outer_tail(int k, const DegreeTable& t, u64 M) {
  const int r = t.rank;
  const Rat maxC = t.max_defect();
  constexpr std::uint32_t P = 10001;  // P - 1 = 10^4 keeps the integral tail rational
  Rat best = -1;
  for (int j = 2; j < 4 * (k - 1); ++j) {
    // prod_{ell < P} (1 + f(ell) ell^sigma), evaluated in long double then inflated
    long double prod = 1;
    std::size_t ops = 0;
    for (std::uint32_t ell : primes_below(P)) {
      long double l = ell;
      long double lr1 = std::pow(l, static_cast<long double>(r + 1));
      long double f = lr1 / ((lr1 - 1) * (l - 1) * std::pow(l, static_cast<long double>(k - 1)));
      long double sig = to_long_double(detail::quarter_power_upper(ell, j));
      prod *= 1 + f * sig;
      ops += 8;
    }
    // ell >= P: f(ell) ell^sigma <= 2 ell^(sigma-k), summed over integers n >= P
    // and bounded by the integral 2 (P-1)^(sigma-k+1) / (k-1-sigma)
    Rat expo = Rat(4 * (k - 1) - j, 4);  // k - 1 - sigma > 0
    Rat integral = Rat(2) / expo / rat_pow(Rat(10), 4 * (k - 1) - j);
    if (integral >= 1) continue;
    Rat tail_factor = Rat(1) / (1 - integral);
    // inflation covering the long double rounding of the product
    long double inflate = 1 + static_cast<long double>(ops) * 1e-18L + 1e-12L;
    Rat prod_rat = Rat(BigInt(static_cast<u64>(std::ceil(prod * inflate * 1e12L))), BigInt(1'000'000'000'000ULL));
    Rat bound = maxC * prod_rat * tail_factor / detail::quarter_power_lower(M, j);
    if (best < 0 || bound < best) best = bound;
  }
  return best;
}


/// Truncated series sum_{m <= M} mu(m) rho_{m^k} with certified inner and outer tails.
inline DensityValue beta_series(int k, const DegreeTable& t, u64 M = 100, unsigned inner_shift = 14) {
  if (k < 2) throw std::domain_error("beta_series: k must be >= 2");
  if (!detail::is_k_free(t.torsion, k)) return DensityValue::of_interval(0, 0);
  DegreeTable free = t;
  free.torsion = 1;
  Rat lo = 0, hi = 0;
  for (u64 m = 1; m <= M; ++m) {
    int mu = mobius(m);
    if (mu == 0) continue;
    u64 mk = 1;
    for (int i = 0; i < k; ++i) {
      if (mk > UINT64_MAX / m) throw std::overflow_error("beta_series: m^k exceeds 64 bits");
      mk *= m;
    }
    int bits = 0;
    while (bits < 64 && (mk >> bits) > 1) ++bits;
    unsigned shift = std::min<unsigned>(inner_shift, bits < 61 ? static_cast<unsigned>(61 - bits) : 0u);
    DensityValue v = rho_series(mk, free, FrobTrivial{}, mk << shift);
    if (mu > 0) {
      lo += v.interval->first;
      hi += v.interval->second;
    } else {
      lo -= v.interval->second;
      hi -= v.interval->first;
    }
  }
  Rat outer = beta_outer_tail(k, free, M);
  return DensityValue::of_interval(std::max(Rat(0), lo - outer), std::min(Rat(1), hi + outer));
}

// ---------------------------------------------------------------------------
// Prescribed valuations and coprimality

inline void check_valuation_shape(u64 k, u64 m) {
  if (k == 0 || !is_squarefree(k)) throw std::domain_error("valuation density: k must be squarefree");
  if (m == 0 || k % radical(m) != 0) throw std::domain_error("valuation density: need rad(m) | k");
}

/// sum_{f | k} mu(f) rho_{mf}: exact in Trivial mode, an interval otherwise.
inline DensityValue gamma_via_rho(u64 k, u64 m, const DegreeTable& t, const FrobeniusSpec& frob = FrobTrivial{}) {
  check_valuation_shape(k, m);
  if (std::holds_alternative<FrobTrivial>(frob)) {
    Rat sum = 0;
    for (u64 f : divisors(k)) sum += mobius(f) * *rho_closed(m * f, t).exact;
    return DensityValue::of_exact(sum);
  }
  Rat lo = 0, hi = 0;
  for (u64 f : divisors(k)) {
    DensityValue v = rho_series(m * f, t, frob);
    if (mobius(f) > 0) {
      lo += v.interval->first;
      hi += v.interval->second;
    } else {
      lo -= v.interval->second;
      hi -= v.interval->first;
    }
  }
  return DensityValue::of_interval(lo, hi);
}

/// Closed formula for v_ell(ord) = v_ell(m) at every ell | k.
inline DensityValue gamma_closed(u64 k, u64 m, const DegreeTable& t) {
  check_valuation_shape(k, m);
  if (t.torsion > 1) return gamma_via_rho(k, m, t);
  const int r = t.rank;
  const FactoredInt fk = factorize_u64(k), fm = factorize_u64(m), fz = factorize_u64(t.z);
  Rat lead = Rat(1, euler_phi(fm));
  for (auto [ell, e] : fk.factors) {
    if (fz.exponent(ell) != 0) continue;
    const Rat L(ell), lr = detail::ell_pow(ell, r), lr1 = detail::ell_pow(ell, r + 1);
    if (fm.exponent(ell) > 0)
      lead *= (L - 1) * (lr - 1) / (lr1 - 1);
    else
      lead *= 1 - L * (lr - 1) / ((lr1 - 1) * (L - 1));
  }
  const u64 mz = std::gcd(m, t.z);
  Rat sum = 0;
  for (u64 g : divisors(fz)) {
    if (g % mz != 0 || k % radical(g) != 0) continue;
    const FactoredInt fg = factorize_u64(g);
    for (u64 h : divisors(fg)) {
      Rat term = detail::defect(t, g, h);
      for (auto [ell, ge] : fg.factors) {
        term *= detail::gamma_local(ell, r, fm.exponent(ell), fz.exponent(ell), ge, valuation(h, ell));
        if (term == 0) break;
      }
      sum += term;
    }
  }
  return DensityValue::of_exact(lead * sum);
}

/// Closed formula for (ord, k) = 1 over the torsion-free part.
inline Rat coprime_closed_free(u64 k, const DegreeTable& t) {
  const int r = t.rank;
  const FactoredInt fk = factorize_u64(k), fz = factorize_u64(t.z);
  Rat lead = 1;
  for (auto [ell, e] : fk.factors) {
    if (fz.exponent(ell) != 0) continue;
    const Rat L(ell), lr = detail::ell_pow(ell, r), lr1 = detail::ell_pow(ell, r + 1);
    lead *= 1 - L * (lr - 1) / ((lr1 - 1) * (L - 1));
  }
  Rat sum = 0;
  for (u64 g : divisors(fz)) {
    if (k % radical(g) != 0) continue;
    const FactoredInt fg = factorize_u64(g);
    for (u64 h : divisors(fg)) {
      int mu = mobius(g / h);
      if (mu == 0) continue;
      Rat p = Rat(euler_phi(g), euler_phi(g / h) * h);
      for (auto [ell, he] : factorize_u64(h).factors) {
        const Rat L(ell), lr1 = detail::ell_pow(ell, r + 1);
        const int ze = fz.exponent(ell);
        if (he == ze) p *= lr1 / (lr1 - 1);
        if (he == fg.exponent(ell) && he < ze) p *= L / (L - 1);
      }
      sum += mu * p / Rat(t.at(g, h));
    }
  }
  return lead * sum;
}

/// Density of (ord, k) = 1; in Trivial mode the closed formula is checked
/// against sum_{f | k} mu(f) rho_f.
inline DensityValue coprime_density(u64 k, const DegreeTable& t, const FrobeniusSpec& frob = FrobTrivial{}) {
  if (k == 0 || !is_squarefree(k)) throw std::domain_error("coprime_density: k must be squarefree");
  if (!std::holds_alternative<FrobTrivial>(frob)) return gamma_via_rho(k, 1, t, frob);
  Rat mobius_sum = *gamma_via_rho(k, 1, t).exact;
  if (t.torsion == 1) {
    Rat closed = coprime_closed_free(k, t);
    if (closed != mobius_sum)
      throw std::logic_error("coprime_density: closed form " + to_string(closed) + " disagrees with the Mobius sum " +
                             to_string(mobius_sum));
  }
  return DensityValue::of_exact(mobius_sum);
}

}  // namespace divord
