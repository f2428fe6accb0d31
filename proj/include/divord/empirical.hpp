#pragma once

// Brute-force side: event frequencies among the degree-1 primes of K up to X,
// from the order and index of G mod p.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "divord/arith.hpp"
#include "divord/field.hpp"
#include "divord/group.hpp"

namespace divord {

// ---- prime enumeration --------------------------------------------------------

/// Primes in [lo, hi) with the distinct prime factors of p - 1 attached.
struct PrimeSegment {
  static constexpr std::size_t kMaxFactors = 12;
  std::vector<u64> primes;
  std::vector<std::array<std::uint32_t, kMaxFactors>> factors;
  std::vector<std::uint8_t> factor_count;
};

namespace detail {

inline std::vector<std::uint32_t> sieve_upto(std::uint32_t n) {
  std::vector<std::uint8_t> comp(n + 1, 0);
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 2; i <= n; ++i) {
    if (comp[i]) continue;
    out.push_back(i);
    for (u64 j = static_cast<u64>(i) * i; j <= n; j += i) comp[j] = 1;
  }
  return out;
}

inline std::uint32_t isqrt_u64(u64 x) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<long double>(x)));
  while (r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return static_cast<std::uint32_t>(r);
}

}  // namespace detail

/// Sieves [lo, hi) using `base` (all primes up to sqrt(hi)); when `with_factors`
/// the distinct prime factors of p - 1 are recorded by a second sieve.
inline PrimeSegment sieve_segment(u64 lo, u64 hi, const std::vector<std::uint32_t>& base, bool with_factors) {
  PrimeSegment seg;
  if (hi <= lo) return seg;
  const std::size_t len = hi - lo;
  std::vector<std::uint8_t> comp(len, 0);
  for (std::uint32_t q : base) {
    u64 q2 = static_cast<u64>(q) * q;
    if (q2 >= hi) break;
    u64 start = std::max(q2, (lo + q - 1) / q * q);
    for (u64 j = start; j < hi; j += q) comp[j - lo] = 1;
  }
  for (u64 n = std::max<u64>(lo, 2); n < hi; ++n)
    if (!comp[n - lo]) seg.primes.push_back(n);
  if (!with_factors) return seg;

  // rem[i] tracks the unfactored part of (lo + i) - 1
  std::vector<u64> rem(len);
  std::vector<std::array<std::uint32_t, PrimeSegment::kMaxFactors>> facs(len);
  std::vector<std::uint8_t> cnt(len, 0);
  for (std::size_t i = 0; i < len; ++i) rem[i] = lo + i == 0 ? 0 : lo + i - 1;
  for (std::uint32_t q : base) {
    if (static_cast<u64>(q) * q > hi) break;
    // indices i with (lo + i - 1) divisible by q
    u64 first = lo == 0 ? 1 : lo - 1;
    u64 start = (first + q - 1) / q * q;
    for (u64 v = start; v + 1 < hi; v += q) {
      std::size_t i = static_cast<std::size_t>(v + 1 - lo);
      if (comp[i] || rem[i] == 0) continue;
      facs[i][cnt[i]++] = q;
      while (rem[i] % q == 0) rem[i] /= q;
    }
  }
  for (u64 p : seg.primes) {
    std::size_t i = static_cast<std::size_t>(p - lo);
    if (rem[i] > 1) facs[i][cnt[i]++] = static_cast<std::uint32_t>(rem[i]);
    seg.factors.push_back(facs[i]);
    seg.factor_count.push_back(cnt[i]);
  }
  return seg;
}

inline constexpr u64 kSegmentLength = u64{1} << 16;

/// Calls `fn(p)` for every prime p <= X in increasing order.
template <class Fn>
void prime_stream(u64 X, Fn&& fn) {
  if (X < 2) return;
  if (X >= (u64{1} << 32)) throw std::invalid_argument("prime_stream supports X < 2^32");
  auto base = detail::sieve_upto(detail::isqrt_u64(X) + 1);
  for (u64 lo = 0; lo <= X; lo += kSegmentLength) {
    auto seg = sieve_segment(lo, std::min(X + 1, lo + kSegmentLength), base, false);
    for (u64 p : seg.primes) fn(p);
  }
}

inline u64 prime_count(u64 X) {
  u64 n = 0;
  prime_stream(X, [&](u64) { ++n; });
  return n;
}

// ---- polynomials over F_p -----------------------------------------------------

namespace detail {

using PolyP = std::vector<u64>;  // low degree first

inline void trim_p(PolyP& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline PolyP poly_mod_p(PolyP a, const PolyP& m, u64 p) {
  trim_p(a);
  const std::size_t dm = m.size() - 1;
  const u64 inv_lead = inv_mod(m.back(), p);
  while (a.size() > dm) {
    u64 c = mul_mod(a.back(), inv_lead, p);
    std::size_t shift = a.size() - 1 - dm;
    for (std::size_t j = 0; j <= dm; ++j) a[shift + j] = (a[shift + j] + p - mul_mod(c, m[j], p)) % p;
    trim_p(a);
  }
  return a;
}

inline PolyP poly_mulmod_p(const PolyP& a, const PolyP& b, const PolyP& m, u64 p) {
  if (a.empty() || b.empty()) return {};
  PolyP c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + mul_mod(a[i], b[j], p)) % p;
  return poly_mod_p(std::move(c), m, p);
}

inline PolyP poly_powmod_p(PolyP base, u64 e, const PolyP& m, u64 p) {
  PolyP r{1};
  base = poly_mod_p(std::move(base), m, p);
  while (e) {
    if (e & 1) r = poly_mulmod_p(r, base, m, p);
    base = poly_mulmod_p(base, base, m, p);
    e >>= 1;
  }
  return r;
}

inline PolyP poly_gcd_p(PolyP a, PolyP b, u64 p) {
  trim_p(a);
  trim_p(b);
  while (!b.empty()) {
    PolyP r = poly_mod_p(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    u64 inv = inv_mod(a.back(), p);
    for (auto& c : a) c = mul_mod(c, inv, p);
  }
  return a;
}

inline PolyP poly_sub_p(PolyP a, const PolyP& b, u64 p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
  trim_p(a);
  return a;
}

inline PolyP poly_divexact_p(PolyP a, const PolyP& b, u64 p) {
  trim_p(a);
  const std::size_t db = b.size() - 1;
  if (a.size() < b.size()) return {};
  PolyP q(a.size() - db, 0);
  const u64 inv_lead = inv_mod(b.back(), p);
  while (a.size() >= b.size()) {
    u64 c = mul_mod(a.back(), inv_lead, p);
    std::size_t shift = a.size() - 1 - db;
    q[shift] = c;
    for (std::size_t j = 0; j <= db; ++j) a[shift + j] = (a[shift + j] + p - mul_mod(c, b[j], p)) % p;
    trim_p(a);
  }
  return q;
}

// Splits a monic squarefree product of distinct linear factors.
inline void split_linear(const PolyP& g, u64 p, std::mt19937_64& rng, std::vector<u64>& out) {
  if (g.size() <= 1) return;
  if (g.size() == 2) {
    out.push_back((p - g[0]) % p);
    return;
  }
  if (p == 2) {
    for (u64 x = 0; x < 2; ++x) {
      u64 v = 0;
      for (std::size_t i = g.size(); i-- > 0;) v = (v * x + g[i]) % p;
      if (v == 0) out.push_back(x);
    }
    return;
  }
  for (;;) {
    u64 delta = rng() % p;
    PolyP h = poly_powmod_p({delta, 1}, (p - 1) / 2, g, p);
    PolyP d = poly_gcd_p(g, poly_sub_p(h, {1}, p), p);
    if (d.size() > 1 && d.size() < g.size()) {
      split_linear(d, p, rng, out);
      split_linear(poly_divexact_p(g, d, p), p, rng, out);
      return;
    }
  }
}

inline PolyP reduce_int_poly(const IntPoly& f, u64 p) {
  PolyP out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    BigInt r = f[i] % p;
    if (r < 0) r += p;
    out[i] = r.convert_to<u64>();
  }
  return out;
}

}  // namespace detail

/// Distinct roots of f in F_p, sorted. The random splitting is seeded from p,
/// so the result is reproducible.
inline std::vector<u64> roots_mod_p(const IntPoly& f, u64 p) {
  detail::PolyP fp = detail::reduce_int_poly(f, p);
  detail::trim_p(fp);
  if (fp.size() <= 1) return {};
  if (fp.size() == 2) {
    return {mul_mod((p - fp[0]) % p, inv_mod(fp[1], p), p)};
  }
  detail::PolyP xp = detail::poly_powmod_p({0, 1}, p, fp, p);
  detail::PolyP g = detail::poly_gcd_p(fp, detail::poly_sub_p(xp, {0, 1}, p), p);
  std::vector<u64> out;
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL ^ p);
  detail::split_linear(g, p, rng, out);
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<u64> roots_mod_p(const FieldSpec& k, u64 p) { return roots_mod_p(k.poly(), p); }

// ---- bad primes and reduction ------------------------------------------------

/// Primes dividing disc(f) or the torsion order t, together with the primes
/// in the denominators and norms of the generators.
inline std::set<u64> compute_bad_primes(const GroupSpec& g) {
  const FieldSpec& k = g.field();
  std::set<u64> out;
  auto add = [&](BigInt v) {
    if (v < 0) v = -v;
    if (v == 0 || v == 1) return;
    if (v > BigInt(UINT64_MAX)) throw std::domain_error("bad-prime data exceeds 64 bits: " + v.str());
    for (u64 q : prime_factors(v.convert_to<u64>())) out.insert(q);
  };
  if (!k.is_rational()) add(k.discriminant());
  for (const auto& e : g.all_elements()) {
    for (const auto& c : e) add(denominator(c));
    Rat n = k.norm(e);
    add(numerator(n));
    add(denominator(n));
  }
  add(BigInt(g.torsion()));
  return out;
}

/// A degree-1 prime of K: a rational prime with a root of f modulo it.
struct Degree1Prime {
  u64 p = 0;
  u64 root = 0;
};

struct OrdIndex {
  u64 ord = 0;
  u64 ind = 0;
};

/// Evaluates elements of K at a root of f modulo p.
class Reducer {
 public:
  explicit Reducer(const std::vector<Element>& elements) {
    for (const auto& e : elements) {
      std::vector<std::pair<BigInt, BigInt>> coeffs;
      for (const auto& c : e) coeffs.emplace_back(numerator(c), denominator(c));
      elems_.push_back(std::move(coeffs));
    }
  }

  std::size_t size() const { return elems_.size(); }

  u64 reduce(std::size_t idx, u64 p, u64 root) const {
    u64 acc = 0, power = 1;
    for (const auto& [num, den] : elems_[idx]) {
      if (num != 0) {
        u64 d = residue(den, p);
        if (d == 0) throw std::logic_error("denominator not invertible at p = " + std::to_string(p));
        u64 c = mul_mod(residue(num, p), inv_mod(d, p), p);
        acc = (acc + mul_mod(c, power, p)) % p;
      }
      power = mul_mod(power, root, p);
    }
    if (acc == 0) throw std::logic_error("generator reduces to zero at p = " + std::to_string(p));
    return acc;
  }

 private:
  static u64 residue(const BigInt& v, u64 p) {
    BigInt r = v % p;
    if (r < 0) r += p;
    return r.convert_to<u64>();
  }

  std::vector<std::vector<std::pair<BigInt, BigInt>>> elems_;
};

/// Convenience: reduction of a single element.
inline u64 reduce_generator(const Element& e, u64 p, u64 root) { return Reducer({e}).reduce(0, p, root); }

/// Multiplicative order of x in F_p^x, given the distinct primes dividing p - 1.
template <class It>
u64 multiplicative_order(u64 x, u64 p, It fbegin, It fend) {
  u64 ord = p - 1;
  for (It it = fbegin; it != fend; ++it) {
    const u64 q = *it;
    while (ord % q == 0 && pow_mod(x, ord / q, p) == 1) ord /= q;
  }
  return ord;
}

/// Order and index of G mod p, where `residues` are the reductions of all
/// generators (torsion included) and `factors` the distinct primes of p - 1.
template <class It>
OrdIndex ord_index(const std::vector<u64>& residues, u64 p, It fbegin, It fend) {
  u64 ord = 1;
  for (u64 x : residues) ord = std::lcm(ord, multiplicative_order(x, p, fbegin, fend));
  OrdIndex out{ord, (p - 1) / ord};
  if (out.ord * out.ind != p - 1) throw std::logic_error("ord * ind != p - 1 at p = " + std::to_string(p));
  return out;
}

inline OrdIndex ord_index(const GroupSpec& g, u64 p, u64 root) {
  Reducer red(g.all_elements());
  std::vector<u64> res;
  for (std::size_t i = 0; i < red.size(); ++i) res.push_back(red.reduce(i, p, root));
  auto fs = prime_factors(p - 1);
  return ord_index(res, p, fs.begin(), fs.end());
}

// ---- events -----------------------------------------------------------------

struct Event {
  enum class Kind { Divisible, KFree, Valuation, Coprime, KummerSplit };
  Kind kind = Kind::Divisible;
  u64 a = 1;  // m, k, k, k, m
  u64 b = 1;  // -, -, m, -, n

  static Event divisible(u64 m) { return checked({Kind::Divisible, m, 1}); }
  static Event kfree(u64 k) { return checked({Kind::KFree, k, 1}); }
  static Event valuation(u64 k, u64 m) { return checked({Kind::Valuation, k, m}); }
  static Event coprime(u64 k) { return checked({Kind::Coprime, k, 1}); }
  static Event kummer_split(u64 m, u64 n) { return checked({Kind::KummerSplit, m, n}); }

  /// Parses div:m, kfree:k, val:k,m, coprime:k, kummer:m,n.
  static Event parse(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("event '" + text + "' lacks ':'");
    std::string name = text.substr(0, colon), args = text.substr(colon + 1);
    std::vector<u64> v;
    std::size_t pos = 0;
    while (pos <= args.size()) {
      auto comma = args.find(',', pos);
      std::string item = args.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("bad event argument '" + item + "' in '" + text + "'");
      v.push_back(std::stoull(item));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    auto need = [&](std::size_t n) {
      if (v.size() != n) throw std::invalid_argument("event '" + text + "' expects " + std::to_string(n) + " argument(s)");
    };
    if (name == "div") return need(1), divisible(v[0]);
    if (name == "kfree") return need(1), kfree(v[0]);
    if (name == "val") return need(2), valuation(v[0], v[1]);
    if (name == "coprime") return need(1), coprime(v[0]);
    if (name == "kummer") return need(2), kummer_split(v[0], v[1]);
    throw std::invalid_argument("unknown event '" + name + "' (div, kfree, val, coprime, kummer)");
  }

  std::string name() const {
    switch (kind) {
      case Kind::Divisible: return "div:" + std::to_string(a);
      case Kind::KFree: return "kfree:" + std::to_string(a);
      case Kind::Valuation: return "val:" + std::to_string(a) + "," + std::to_string(b);
      case Kind::Coprime: return "coprime:" + std::to_string(a);
      case Kind::KummerSplit: return "kummer:" + std::to_string(a) + "," + std::to_string(b);
    }
    return "?";
  }

  bool holds(u64 p, const OrdIndex& oi) const {
    switch (kind) {
      case Kind::Divisible: return oi.ord % a == 0;
      case Kind::KFree: {
        for (u64 ell : prime_factors(oi.ord))
          if (divord::valuation(oi.ord, ell) >= static_cast<int>(a)) return false;
        return true;
      }
      case Kind::Valuation: {
        for (u64 ell : prime_factors(a))
          if (divord::valuation(oi.ord, ell) != divord::valuation(b, ell)) return false;
        return true;
      }
      case Kind::Coprime: return std::gcd(oi.ord, a) == 1;
      case Kind::KummerSplit: return (p - 1) % a == 0 && oi.ind % b == 0;
    }
    return false;
  }

 private:
  static Event checked(Event e) {
    if (e.a == 0 || e.b == 0) throw std::invalid_argument("event parameters must be positive");
    switch (e.kind) {
      case Kind::KFree:
        if (e.a < 2) throw std::invalid_argument("kfree needs k >= 2");
        break;
      case Kind::Valuation:
        if (!is_squarefree(e.a)) throw std::invalid_argument("val needs squarefree k");
        for (u64 ell : prime_factors(e.b))
          if (e.a % ell != 0) throw std::invalid_argument("val needs rad(m) | k");
        break;
      case Kind::KummerSplit:
        if (e.a % e.b != 0) throw std::invalid_argument("kummer needs n | m");
        break;
      default:
        break;
    }
    return e;
  }
};

struct EmpiricalCount {
  std::string event;
  u64 X = 0;
  u64 matched = 0;
  u64 total = 0;
  u64 excluded = 0;

  bool defined() const { return total > 0; }
  double ratio() const { return total ? static_cast<double>(matched) / static_cast<double>(total) : 0.0; }

  /// `count <event> <X> <matched> <total> <excluded> <ratio>`
  std::string record() const {
    char buf[32];
    if (defined())
      std::snprintf(buf, sizeof buf, "%.6f", ratio());
    else
      std::snprintf(buf, sizeof buf, "undefined");
    return "count " + event + " " + std::to_string(X) + " " + std::to_string(matched) + " " + std::to_string(total) + " " +
           std::to_string(excluded) + " " + buf;
  }
};

struct EmpiricalOptions {
  unsigned threads = 0;              // 0: hardware concurrency
  bool check_power_criterion = true; // n | ind versus n-th power test on a 1% sample
};

/// Counts every event over the degree-1 primes of K with p <= X, skipping bad
/// primes. Orders are computed once per prime and shared by all events.
inline std::vector<EmpiricalCount> count_events(const GroupSpec& g, const std::vector<Event>& events, u64 X,
                                                EmpiricalOptions opt = {}) {
  if (X < 2) throw std::invalid_argument("X must be >= 2");
  if (X >= (u64{1} << 32)) throw std::invalid_argument("X must be < 2^32");
  const auto bad = compute_bad_primes(g);
  const Reducer red(g.all_elements());
  const FieldSpec& k = g.field();
  const auto base = detail::sieve_upto(detail::isqrt_u64(X) + 1);
  const u64 nseg = X / kSegmentLength + 1;

  std::vector<u64> kummer_n;
  for (const auto& e : events)
    if (e.kind == Event::Kind::KummerSplit && e.b > 1) kummer_n.push_back(e.b);

  struct Partial {
    std::vector<u64> matched;
    u64 total = 0, excluded = 0;
  };
  unsigned nthreads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  nthreads = static_cast<unsigned>(std::min<u64>(nthreads, nseg));
  std::vector<Partial> parts(nthreads, Partial{std::vector<u64>(events.size(), 0)});
  std::atomic<u64> next{0};
  std::vector<std::string> errors(nthreads);

  auto worker = [&](unsigned id) {
    Partial& acc = parts[id];
    std::vector<u64> res(red.size());
    try {
      for (u64 s = next++; s < nseg; s = next++) {
        u64 lo = s * kSegmentLength, hi = std::min(X + 1, lo + kSegmentLength);
        auto seg = sieve_segment(lo, hi, base, true);
        for (std::size_t i = 0; i < seg.primes.size(); ++i) {
          const u64 p = seg.primes[i];
          if (bad.count(p)) {
            ++acc.excluded;
            continue;
          }
          const auto& fs = seg.factors[i];
          const auto fend = fs.begin() + seg.factor_count[i];
          std::vector<u64> roots = k.is_rational() ? std::vector<u64>{0} : roots_mod_p(k, p);
          for (u64 root : roots) {
            for (std::size_t j = 0; j < red.size(); ++j) res[j] = red.reduce(j, p, root);
            OrdIndex oi = ord_index(res, p, fs.begin(), fend);
            ++acc.total;
            for (std::size_t e = 0; e < events.size(); ++e)
              if (events[e].holds(p, oi)) ++acc.matched[e];
            if (opt.check_power_criterion && p % 100 == 1) {
              for (u64 n : kummer_n) {
                if ((p - 1) % n != 0) continue;
                bool all_powers = true;
                for (u64 x : res) all_powers = all_powers && pow_mod(x, (p - 1) / n, p) == 1;
                if (all_powers != (oi.ind % n == 0))
                  throw std::logic_error("n | ind disagrees with the n-th power test at p = " + std::to_string(p));
              }
            }
          }
        }
      }
    } catch (const std::exception& ex) {
      errors[id] = ex.what();
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(worker, t);
  worker(0);
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (!e.empty()) throw std::logic_error(e);

  std::vector<EmpiricalCount> out;
  for (std::size_t e = 0; e < events.size(); ++e) {
    EmpiricalCount c{events[e].name(), X, 0, 0, 0};
    for (const auto& part : parts) {
      c.matched += part.matched[e];
      c.total += part.total;
      c.excluded += part.excluded;
    }
    out.push_back(c);
  }
  return out;
}

inline EmpiricalCount count_event(const GroupSpec& g, const Event& event, u64 X, EmpiricalOptions opt = {}) {
  return count_events(g, {event}, X, opt).front();
}

}  // namespace divord
