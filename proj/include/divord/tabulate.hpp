#pragma once

// Kummer degree tables over any supported field, certified by Frobenius data.
//
// [K(zeta_m):K] is the order of the subgroup of (Z/m)^x generated by N(p) mod m
// over degree-1 primes p of K. For ell^e || n, the ell-part of
// [K_{m,n}:K(zeta_m)] is ell^{er} divided by the number of exponent vectors a
// in (Z/ell^e)^r with g^a an ell^e-th power modulo every sampled degree-1
// prime p with N(p) = 1 mod m; those primes split completely in K(zeta_m),
// so the sample detects ell^e-th powers there. The modulus z is grown until
// the lift identity holds at every probe.

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "divord/arith.hpp"
#include "divord/empirical.hpp"
#include "divord/group.hpp"
#include "divord/kummer.hpp"
#include "divord/linalg.hpp"

namespace divord {

struct TabulateOptions {
  std::size_t primes_per_modulus = 160;
  std::vector<u64> probe_primes = {2, 3, 5, 7};
  u64 z_limit = u64{1} << 24;
};

class KummerTabulator {
 public:
  explicit KummerTabulator(const GroupSpec& g, TabulateOptions opt = {})
      : g_(g), opt_(std::move(opt)), bad_(compute_bad_primes(g)), red_(g.generators()) {}

  /// [K(zeta_m):K].
  u64 cyclotomic_degree(u64 m) {
    if (m <= 2) return 1;
    if (auto it = cyclo_.find(m); it != cyclo_.end()) return it->second;
    std::set<u64> subgroup{1};
    std::size_t used = 0;
    for (u64 p = 2; used < opt_.primes_per_modulus; ++p) {
      if (!is_prime(p) || bad_.count(p) || m % p == 0) continue;
      if (!g_.field().is_rational() && roots_mod_p(g_.field(), p).empty()) continue;
      ++used;
      u64 x = p % m;
      if (!subgroup.insert(x).second) continue;
      for (bool grew = true; grew;) {
        grew = false;
        std::vector<u64> elems(subgroup.begin(), subgroup.end());
        for (u64 a : elems)
          if (subgroup.insert(mul_mod(a, x, m)).second) grew = true;
      }
    }
    return cyclo_[m] = subgroup.size();
  }

  /// [K_{m,n}:K] for n | m.
  BigInt degree(u64 m, u64 n) {
    if (m == 0 || n == 0 || m % n != 0) throw std::domain_error("degree: need n | m");
    if (auto it = deg_.find({m, n}); it != deg_.end()) return it->second;
    const unsigned r = static_cast<unsigned>(g_.rank());
    BigInt d = cyclotomic_degree(m);
    for (auto [ell, e] : factorize_u64(n).factors) {
      int k = kernel_log(m, ell, e);
      d *= big_pow(BigInt(ell), static_cast<unsigned>(static_cast<int>(e) * static_cast<int>(r) - k));
    }
    return deg_[{m, n}] = d;
  }

  DegreeTable table(u64 z) {
    DegreeTable t;
    t.field = g_.field().label();
    t.generators = g_.generators_joined();
    t.rank = g_.rank();
    t.torsion = g_.torsion();
    t.z = z;
    t.provenance = Provenance::EmpiricalUnverified;
    for (u64 gdiv : divisors(z))
      for (u64 h : divisors(gdiv)) t.entries[{gdiv, h}] = degree(gdiv, h);
    return t;
  }

  /// True when the lift from z reproduces the direct degree at every n | m.
  bool lift_holds(u64 z, u64 m) {
    const unsigned r = static_cast<unsigned>(g_.rank());
    for (u64 n : divisors(m)) {
      const u64 mz = std::gcd(m, z), nz = std::gcd(n, z);
      BigInt lifted = BigInt(euler_phi(m) / euler_phi(mz)) * big_pow(BigInt(n / nz), r) * degree(mz, nz);
      if (lifted != degree(m, n)) return false;
    }
    return true;
  }

  /// Starts from z = 8 times the odd primes of disc(K) and of the generator
  /// norms, then multiplies z by a probe prime q whenever the lift fails at
  /// z q^j (j <= 3) or z q q'. Returns the validated table.
  DegreeTable tabulate() {
    std::set<u64> support;
    if (!g_.field().is_rational())
      for (u64 q : prime_factors(abs_u64(g_.field().discriminant()))) support.insert(q);
    for (const auto& e : g_.generators()) {
      Rat nm = g_.field().norm(e);
      for (u64 q : prime_factors(abs_u64(numerator(nm)))) support.insert(q);
      for (u64 q : prime_factors(abs_u64(denominator(nm)))) support.insert(q);
    }
    u64 z = 8;
    for (u64 q : support)
      if (q != 2) z *= q;
    std::set<u64> probes(support);
    probes.insert(opt_.probe_primes.begin(), opt_.probe_primes.end());
    for (bool changed = true; changed;) {
      changed = false;
      for (u64 q : probes) {
        bool ok = lift_holds(z, z * q) && lift_holds(z, z * q * q) && lift_holds(z, z * q * q * q);
        for (u64 q2 : probes)
          if (ok && q2 > q) ok = lift_holds(z, z * q * q2);
        if (!ok) {
          z *= q;
          if (z > opt_.z_limit) throw std::runtime_error("tabulate: z exceeds the search limit");
          changed = true;
          break;
        }
      }
    }
    DegreeTable t = table(z);
    t.comments = {"# Kummer degrees certified by Frobenius data at " + std::to_string(opt_.primes_per_modulus) +
                      " degree-1 primes per modulus;",
                  "# z is the smallest modulus found by the lift probe, not claimed minimal."};
    validate(t);
    return t;
  }

 private:
  struct Sample {
    u64 p;
    u64 primitive_root;
    std::vector<u64> residues;
  };

  static u64 abs_u64(BigInt v) {
    if (v < 0) v = -v;
    if (v > BigInt(UINT64_MAX)) throw std::domain_error("value exceeds 64 bits");
    return v.convert_to<u64>();
  }

  static u64 primitive_root(u64 p, const std::vector<u64>& qs) {
    for (u64 c = 2;; ++c) {
      bool ok = true;
      for (u64 q : qs) ok = ok && pow_mod(c, (p - 1) / q, p) != 1;
      if (ok) return c;
    }
  }

  // Degree-1 primes p = 1 mod m of K, one sample per root of f.
  const std::vector<Sample>& samples(u64 m) {
    if (auto it = samples_.find(m); it != samples_.end()) return it->second;
    std::vector<Sample> out;
    for (u64 k = 1; out.size() < opt_.primes_per_modulus; ++k) {
      const u64 p = 1 + k * m;
      if (!is_prime(p) || bad_.count(p)) continue;
      std::vector<u64> roots = g_.field().is_rational() ? std::vector<u64>{0} : roots_mod_p(g_.field(), p);
      if (roots.empty()) continue;
      const u64 gamma = primitive_root(p, prime_factors(p - 1));
      for (u64 root : roots) {
        Sample s{p, gamma, {}};
        for (std::size_t j = 0; j < red_.size(); ++j) s.residues.push_back(red_.reduce(j, p, root));
        out.push_back(std::move(s));
      }
    }
    return samples_[m] = std::move(out);
  }

  // Discrete logarithm of x^((p-1)/ell^e) to base gamma^((p-1)/ell^e), modulo ell^e.
  static u64 dlog_prime_power(u64 x, u64 gamma, u64 p, u64 ell, int e) {
    const u64 q = ipow(ell, static_cast<unsigned>(e));
    const u64 h = pow_mod(gamma, (p - 1) / q, p);
    const u64 y = pow_mod(x, (p - 1) / q, p);
    const u64 h_top = pow_mod(h, q / ell, p);  // order ell
    const u64 h_inv = inv_mod(h, p);
    u64 j = 0, ell_i = 1;
    for (int i = 0; i < e; ++i) {
      u64 t = mul_mod(y, pow_mod(h_inv, j, p), p);
      t = pow_mod(t, q / ell_i / ell, p);
      u64 digit = 0, acc = 1;
      while (acc != t) {
        acc = mul_mod(acc, h_top, p);
        if (++digit >= ell) throw std::logic_error("discrete logarithm failed at p = " + std::to_string(p));
      }
      j += digit * ell_i;
      ell_i *= ell;
    }
    return j;
  }

  int kernel_log(u64 m, u64 ell, int e) {
    auto key = std::make_tuple(m, ell, e);
    if (auto it = kernel_.find(key); it != kernel_.end()) return it->second;
    Matrix<i64> rows;
    for (const auto& s : samples(m)) {
      std::vector<i64> row;
      for (u64 x : s.residues) row.push_back(static_cast<i64>(dlog_prime_power(x, s.primitive_root, s.p, ell, e)));
      rows.push_back(std::move(row));
    }
    return kernel_[key] = kernel_log_size_mod_prime_power(rows, ell, e, red_.size());
  }

  GroupSpec g_;
  TabulateOptions opt_;
  std::set<u64> bad_;
  Reducer red_;
  std::map<u64, u64> cyclo_;
  std::map<std::pair<u64, u64>, BigInt> deg_;
  std::map<u64, std::vector<Sample>> samples_;
  std::map<std::tuple<u64, u64, int>, int> kernel_;
};

inline DegreeTable tabulate_degree_table(const GroupSpec& g, TabulateOptions opt = {}) {
  return KummerTabulator(g, std::move(opt)).tabulate();
}

/// Counts degree-1 primes with N(p) <= X that split completely in K_{m,n};
/// the ratio estimates 1 / lift_degree(table, m, n).
inline EmpiricalCount empirical_degree_check(const GroupSpec& g, u64 m, u64 n, u64 X, EmpiricalOptions opt = {}) {
  return count_event(g, Event::kummer_split(m, n), X, opt);
}

}  // namespace divord
