#pragma once

// Exact integer and rational arithmetic shared by the rest of the library:
// factorization (trial division + Pollard-Brent, deterministic Miller-Rabin
// below 2^64) and the elementary multiplicative functions.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace divord {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;
using Rat = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend, boost::multiprecision::et_off>;

inline Rat make_rat(const BigInt& num, const BigInt& den) { return Rat(num, den); }

inline BigInt numerator(const Rat& q) { return boost::multiprecision::numerator(q); }
inline BigInt denominator(const Rat& q) { return boost::multiprecision::denominator(q); }

/// "p/q", or "p" when the denominator is 1.
inline std::string to_string(const Rat& q) {
  auto d = denominator(q);
  if (d == 1) return numerator(q).str();
  return numerator(q).str() + "/" + d.str();
}

inline Rat parse_rat(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(BigInt(s));
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den == 0) throw std::domain_error("zero denominator in '" + s + "'");
    return Rat(num, den);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("not a rational number: '" + s + "'");
  }
}

inline long double to_long_double(const Rat& q) {
  return q.convert_to<long double>();
}

inline Rat rat_pow(const Rat& base, int e) {
  Rat r = 1;
  Rat b = e >= 0 ? base : Rat(1) / base;
  for (int i = 0, n = e >= 0 ? e : -e; i < n; ++i) r *= b;
  return r;
}

inline u64 ipow(u64 b, unsigned e) {
  u64 r = 1;
  while (e--) r *= b;
  return r;
}

inline BigInt big_pow(const BigInt& b, unsigned e) { return boost::multiprecision::pow(b, e); }

// ---------------------------------------------------------------------------
// Modular arithmetic on 64-bit words

inline u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 pow_mod(u64 base, u64 exp, u64 m) {
  u64 r = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) r = mul_mod(r, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return r;
}

/// Inverse of a modulo m; requires gcd(a, m) = 1.
inline u64 inv_mod(u64 a, u64 m) {
  i64 t = 0, new_t = 1;
  i64 r = static_cast<i64>(m), new_r = static_cast<i64>(a % m);
  while (new_r != 0) {
    i64 q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  if (r != 1) throw std::domain_error("element not invertible modulo " + std::to_string(m));
  return static_cast<u64>(t < 0 ? t + static_cast<i64>(m) : t);
}

// ---------------------------------------------------------------------------
// Primality and factorization

namespace detail {

inline bool miller_rabin_witness(u64 n, u64 a, u64 d, int s) {
  u64 x = pow_mod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < s; ++i) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

inline const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    constexpr std::uint32_t limit = 1'000'000;
    std::vector<bool> composite(limit, false);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i < limit; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (u64 j = u64{i} * i; j < limit; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

}  // namespace detail

/// Deterministic for every 64-bit input (Sinclair's seven-base set).
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
    u64 w = a % n;
    if (w == 0) continue;
    if (!detail::miller_rabin_witness(n, w, d, s)) return false;
  }
  return true;
}

namespace detail {

// Brent's variant of Pollard rho; n odd composite.
inline u64 pollard_brent(u64 n, std::mt19937_64& rng) {
  if (n % 2 == 0) return 2;
  std::uniform_int_distribution<u64> dist(1, n - 1);
  for (;;) {
    u64 y = dist(rng), c = dist(rng), m = 128;
    u64 g = 1, r = 1, q = 1, x = 0, ys = 0;
    auto f = [&](u64 v) {
      u64 s = mul_mod(v, v, n);
      return s >= n - c ? s - (n - c) : s + c;
    };
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r <<= 1;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

inline void factor_rec(u64 n, std::map<u64, int>& out, std::mt19937_64& rng) {
  if (n == 1) return;
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  u64 d = pollard_brent(n, rng);
  factor_rec(d, out, rng);
  factor_rec(n / d, out, rng);
}

}  // namespace detail

/// A nonzero integer as sign times a product of prime powers.
struct FactoredInt {
  int sign = 1;
  std::map<u64, int> factors;  // prime -> exponent >= 1, ascending

  /// Throws std::overflow_error when |value| does not fit in 64 bits.
  u64 abs_value() const {
    u64 v = 1;
    for (auto [p, e] : factors) {
      for (int i = 0; i < e; ++i) {
        if (v > UINT64_MAX / p) throw std::overflow_error("factored integer exceeds 64 bits");
        v *= p;
      }
    }
    return v;
  }
  BigInt value() const {
    BigInt v = 1;
    for (auto [p, e] : factors) v *= big_pow(BigInt(p), static_cast<unsigned>(e));
    return sign * v;
  }
  int exponent(u64 p) const {
    auto it = factors.find(p);
    return it == factors.end() ? 0 : it->second;
  }
  bool operator==(const FactoredInt&) const = default;
};

inline FactoredInt factorize_u64(u64 n) {
  if (n == 0) throw std::domain_error("factorize: zero has no factorization");
  FactoredInt f;
  for (std::uint32_t p : detail::small_primes()) {
    if (u64{p} * p > n) break;
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.factors[p] = e;
  }
  if (n > 1) {
    std::mt19937_64 rng(0x5eed'0f'd1'7011ULL ^ n);
    detail::factor_rec(n, f.factors, rng);
  }
  return f;
}

inline FactoredInt factorize(i64 n) {
  if (n == 0) throw std::domain_error("factorize: zero has no factorization");
  u64 a = n < 0 ? static_cast<u64>(-(n + 1)) + 1 : static_cast<u64>(n);
  FactoredInt f = factorize_u64(a);
  f.sign = n < 0 ? -1 : 1;
  return f;
}

inline int mobius(const FactoredInt& n) {
  for (auto [p, e] : n.factors)
    if (e >= 2) return 0;
  return n.factors.size() % 2 ? -1 : 1;
}
inline int mobius(u64 n) { return mobius(factorize_u64(n)); }

inline u64 euler_phi(const FactoredInt& n) {
  u64 r = 1;
  for (auto [p, e] : n.factors) r *= (p - 1) * ipow(p, static_cast<unsigned>(e - 1));
  return r;
}
inline u64 euler_phi(u64 n) { return euler_phi(factorize_u64(n)); }

inline u64 radical(const FactoredInt& n) {
  u64 r = 1;
  for (auto [p, e] : n.factors) r *= p;
  return r;
}
inline u64 radical(u64 n) { return radical(factorize_u64(n)); }

inline u64 tau(const FactoredInt& n) {
  u64 r = 1;
  for (auto [p, e] : n.factors) r *= static_cast<u64>(e + 1);
  return r;
}
inline u64 tau(u64 n) { return tau(factorize_u64(n)); }

/// v_ell(n) for n >= 1.
inline int valuation(u64 n, u64 ell) {
  if (n == 0) throw std::domain_error("valuation of zero");
  int v = 0;
  while (n % ell == 0) {
    n /= ell;
    ++v;
  }
  return v;
}

inline std::vector<u64> prime_factors(u64 n) {
  std::vector<u64> out;
  for (auto [p, e] : factorize_u64(n).factors) out.push_back(p);
  return out;
}

inline bool is_squarefree(u64 n) { return n >= 1 && mobius(n) != 0; }

inline std::vector<u64> divisors(const FactoredInt& n) {
  std::vector<u64> out{1};
  for (auto [p, e] : n.factors) {
    std::size_t sz = out.size();
    u64 pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < sz; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}
inline std::vector<u64> divisors(u64 n) { return divisors(factorize_u64(n)); }

/// All n <= bound whose prime factors divide m, ascending.
inline std::vector<u64> smooth_divisors(u64 m, u64 bound) {
  std::vector<u64> out{1};
  for (u64 p : prime_factors(m)) {
    std::size_t sz = out.size();
    for (std::size_t i = 0; i < sz; ++i) {
      u64 v = out[i];
      while (v <= bound / p) {
        v *= p;
        out.push_back(v);
      }
    }
  }
  out.erase(std::remove_if(out.begin(), out.end(), [&](u64 v) { return v > bound; }), out.end());
  std::sort(out.begin(), out.end());
  return out;
}

/// (n, m^inf): the part of n supported on the primes of m.
inline u64 gcd_supernatural(u64 n, u64 m) {
  u64 r = 1;
  for (u64 p : prime_factors(m)) {
    while (n % p == 0) {
      n /= p;
      r *= p;
    }
  }
  return r;
}

/// True when every prime factor of n divides m.
inline bool divides_power_of(u64 n, u64 m) { return gcd_supernatural(n, m) == n; }

}  // namespace divord
