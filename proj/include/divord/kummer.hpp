#pragma once

// Kummer degrees [K_{m,n}:K] with K_{m,n} = K(zeta_m, G^{1/n}). A finite table
// over the divisors of the entanglement modulus z extends to every (m, n) by
// the lift identity. Tables over Q are computed natively; others are read
// from line-oriented files.

#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "divord/arith.hpp"
#include "divord/group.hpp"
#include "divord/linalg.hpp"

namespace divord {

enum class Provenance { NativeQ, File, EmpiricalUnverified };

inline std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::NativeQ: return "native-Q";
    case Provenance::File: return "file";
    case Provenance::EmpiricalUnverified: return "empirical-unverified";
  }
  return "?";
}

struct DegreeTable {
  std::string field = "Q";
  std::string generators;  // comma-separated, as written by GroupSpec::generators_joined
  int rank = 1;
  u64 torsion = 1;
  u64 z = 1;
  std::map<std::pair<u64, u64>, BigInt> entries;
  Provenance provenance = Provenance::File;
  std::vector<std::string> comments;  // leading '#' lines, kept for round trips

  const BigInt& at(u64 g, u64 h) const {
    auto it = entries.find({g, h});
    if (it == entries.end())
      throw std::out_of_range("degree table has no entry (" + std::to_string(g) + "," + std::to_string(h) + ")");
    return it->second;
  }

  /// Largest C(g,h) = phi(g) h^r / deg(g,h) over the table; bounds every lifted
  /// term phi(m) n^r / deg(m,n) from above.
  Rat max_defect() const {
    Rat best = 0;
    for (const auto& [gh, d] : entries) {
      Rat c = Rat(BigInt(euler_phi(gh.first)) * big_pow(BigInt(gh.second), static_cast<unsigned>(rank)), d);
      if (c > best) best = c;
    }
    return best;
  }

  bool operator==(const DegreeTable& o) const {
    return field == o.field && generators == o.generators && rank == o.rank && torsion == o.torsion && z == o.z &&
           entries == o.entries;
  }
};

/// [K_{m,n}:K] = phi(m) n^r / (phi((m,z)) (n,z)^r) * [K_{(m,z),(n,z)}:K].
inline BigInt lift_degree(const DegreeTable& t, u64 m, u64 n) {
  if (m == 0 || n == 0 || m % n != 0)
    throw std::domain_error("lift_degree: need n | m, got (m,n)=(" + std::to_string(m) + "," + std::to_string(n) + ")");
  const u64 mz = std::gcd(m, t.z), nz = std::gcd(n, t.z);
  const unsigned r = static_cast<unsigned>(t.rank);
  BigInt num = BigInt(euler_phi(m) / euler_phi(mz)) * big_pow(BigInt(n / nz), r);
  return num * t.at(mz, nz);
}

/// Checks every table invariant; throws std::domain_error naming the offending pair.
inline void validate(const DegreeTable& t) {
  auto where = [](u64 g, u64 h) { return "(" + std::to_string(g) + "," + std::to_string(h) + ")"; };
  if (t.z == 0) throw std::domain_error("degree table: z must be positive");
  if (t.rank < 1) throw std::domain_error("degree table: rank must be >= 1");
  std::size_t expected = 0;
  for (u64 g : divisors(t.z)) {
    for (u64 h : divisors(g)) {
      ++expected;
      auto it = t.entries.find({g, h});
      if (it == t.entries.end()) throw std::domain_error("degree table: missing entry " + where(g, h));
      const BigInt& d = it->second;
      if (d <= 0) throw std::domain_error("degree table: nonpositive degree at " + where(g, h));
      BigInt bound = BigInt(euler_phi(g)) * big_pow(BigInt(h), static_cast<unsigned>(t.rank));
      if (bound % d != 0) throw std::domain_error("degree table: deg" + where(g, h) + " does not divide phi(g) h^r");
      // tower divisibility against the maximal proper subfields
      for (u64 ell : prime_factors(g)) {
        if (h % ell == 0 && t.entries.count({g, h / ell}) && d % t.entries.at({g, h / ell}) != 0)
          throw std::domain_error("degree table: tower divisibility fails at " + where(g, h) + " over " + where(g, h / ell));
        if ((g / ell) % h == 0 && t.entries.count({g / ell, h}) && d % t.entries.at({g / ell, h}) != 0)
          throw std::domain_error("degree table: tower divisibility fails at " + where(g, h) + " over " + where(g / ell, h));
      }
      if (lift_degree(t, g, h) != d) throw std::domain_error("degree table: lift inconsistency at " + where(g, h));
    }
  }
  if (t.at(1, 1) != 1) throw std::domain_error("degree table: deg(1,1) must be 1, found " + t.at(1, 1).str());
  if (t.entries.size() != expected) throw std::domain_error("degree table: entries outside g | z, h | g");
}

/// Property checks on the lifted degrees for m <= max_m, with monotonicity in
/// (m, n) checked up to max_monotone. Returns an empty string or the first
/// failure.
inline std::string check_lift_properties(const DegreeTable& t, u64 max_m = 200, u64 max_monotone = 100) {
  const unsigned r = static_cast<unsigned>(t.rank);
  auto where = [](u64 m, u64 n) { return "(" + std::to_string(m) + "," + std::to_string(n) + ")"; };
  for (u64 m = 1; m <= max_m; ++m) {
    for (u64 n : divisors(m)) {
      const BigInt d = lift_degree(t, m, n);
      const u64 mz = std::gcd(m, t.z), nz = std::gcd(n, t.z);
      BigInt num = BigInt(euler_phi(m)) * big_pow(BigInt(n), r) * lift_degree(t, mz, nz);
      BigInt den = BigInt(euler_phi(mz)) * big_pow(BigInt(nz), r);
      if (num % den != 0 || (num / den) % d != 0) return "lift quotient not integral at " + where(m, n);
      if (BigInt(euler_phi(m)) * big_pow(BigInt(n), r) % d != 0) return "deg" + where(m, n) + " does not divide phi(m) n^r";
      if (mz == 1 && d != BigInt(euler_phi(m)) * big_pow(BigInt(n), r)) return "coprime-to-z regime fails at " + where(m, n);
      if (m > max_monotone) continue;
      for (u64 m2 : divisors(m))
        for (u64 n2 : divisors(std::gcd(n, m2)))
          if (d % lift_degree(t, m2, n2) != 0) return "monotonicity fails: " + where(m2, n2) + " over " + where(m, n);
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Native computation over Q

namespace detail {

inline Matrix<i64> to_i64(const Matrix<BigInt>& a) {
  Matrix<i64> out;
  for (const auto& row : a) {
    std::vector<i64> r;
    for (const auto& v : row) r.push_back(v.convert_to<i64>());
    out.push_back(std::move(r));
  }
  return out;
}

// Rows of Lambda*E: the conditions a square root of a positive rational with
// the given parity vector must meet to lie in Q(zeta_m).
inline Matrix<BigInt> quadratic_condition_rows(const Matrix<BigInt>& e, const std::vector<u64>& primes,
                                               const std::vector<bool>& odd_in_m, bool four_divides, bool eight_divides) {
  const std::size_t r = e.empty() ? 0 : e[0].size();
  Matrix<BigInt> rows;
  std::vector<BigInt> three_mod_four(r, 0);
  bool any_three = false;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const u64 p = primes[i];
    if (p == 2) {
      if (!eight_divides) rows.push_back(e[i]);
      continue;
    }
    if (!odd_in_m[i]) rows.push_back(e[i]);
    if (p % 4 == 3) {
      any_three = true;
      for (std::size_t j = 0; j < r; ++j) three_mod_four[j] += e[i][j];
    }
  }
  if (!four_divides && any_three) rows.push_back(three_mod_four);
  return rows;
}

}  // namespace detail

/// Direct evaluation of [Q(zeta_m, G^{1/n}) : Q] for positive rational generators.
inline BigInt kummer_degree_Q(const GroupSpec& g, u64 m, u64 n) {
  if (!g.field().is_rational()) throw std::domain_error("kummer_degree_Q: field is not Q");
  if (m == 0 || n == 0 || m % n != 0) throw std::domain_error("kummer_degree_Q: need n | m");
  const auto primes = g.support_primes();
  const Matrix<BigInt> e = g.exponent_matrix_Q();
  const std::size_t r = static_cast<std::size_t>(g.rank());
  BigInt deg = BigInt(euler_phi(m)) * big_pow(BigInt(n), static_cast<unsigned>(r));
  for (auto [ell, ex] : factorize_u64(n).factors) {
    Matrix<BigInt> rows;
    if (ell != 2) {
      rows = e;
    } else {
      for (const auto& row : e) {
        std::vector<BigInt> twice;
        for (const auto& v : row) twice.push_back(2 * v);
        rows.push_back(std::move(twice));
      }
      std::vector<bool> odd_in_m;
      for (u64 p : primes) odd_in_m.push_back(m % p == 0);
      for (auto& row : detail::quadratic_condition_rows(e, primes, odd_in_m, m % 4 == 0, m % 8 == 0))
        rows.push_back(std::move(row));
    }
    int k = kernel_log_size_mod_prime_power(detail::to_i64(rows), ell, ex, r);
    deg /= big_pow(BigInt(ell), static_cast<unsigned>(k));
  }
  return deg;
}

/// The entanglement modulus used for tables over Q.
inline u64 entanglement_modulus_Q(const GroupSpec& g) {
  const auto primes = g.support_primes();
  const Matrix<BigInt> e = g.exponent_matrix_Q();
  u64 z = 1;
  for (const auto& s : smith_invariants(e)) {
    for (auto [ell, ex] : factorize_u64(s.convert_to<u64>()).factors)
      if (ell != 2) z = std::lcm(z, ipow(ell, static_cast<unsigned>(ex)));
  }
  // the 2-adic depth is the largest 2-valuation of an invariant of [2E; Lambda E]
  // over every shape Lambda can take
  std::vector<std::size_t> odd_idx;
  for (std::size_t i = 0; i < primes.size(); ++i)
    if (primes[i] != 2) odd_idx.push_back(i);
  int depth = 1;
  const std::size_t variants = std::size_t{1} << (odd_idx.size() + 2);
  for (std::size_t mask = 0; mask < variants; ++mask) {
    std::vector<bool> odd_in_m(primes.size(), false);
    for (std::size_t b = 0; b < odd_idx.size(); ++b) odd_in_m[odd_idx[b]] = (mask >> b) & 1;
    bool four = (mask >> odd_idx.size()) & 1, eight = (mask >> (odd_idx.size() + 1)) & 1;
    if (eight && !four) continue;
    Matrix<BigInt> rows;
    for (const auto& row : e) {
      std::vector<BigInt> twice;
      for (const auto& v : row) twice.push_back(2 * v);
      rows.push_back(std::move(twice));
    }
    for (auto& row : detail::quadratic_condition_rows(e, primes, odd_in_m, four, eight)) rows.push_back(std::move(row));
    for (const auto& t : smith_invariants(rows)) depth = std::max(depth, valuation(t.convert_to<u64>(), 2));
  }
  z = std::lcm(z, ipow(2, static_cast<unsigned>(depth)));
  for (u64 p : primes) {
    u64 disc = p == 2 ? 8 : (p % 4 == 1 ? p : 4 * p);
    z = std::lcm(z, disc);
  }
  return z;
}

inline DegreeTable compute_degree_table_Q(const GroupSpec& g) {
  DegreeTable t;
  t.field = g.field().label();
  t.generators = g.generators_joined();
  t.rank = g.rank();
  t.torsion = g.torsion();
  t.z = entanglement_modulus_Q(g);
  t.provenance = Provenance::NativeQ;
  for (u64 d : divisors(t.z))
    for (u64 h : divisors(d)) t.entries[{d, h}] = kummer_degree_Q(g, d, h);
  validate(t);
  return t;
}

// ---------------------------------------------------------------------------
// Table files

inline std::string serialize(const DegreeTable& t) {
  std::ostringstream os;
  for (const auto& c : t.comments) os << c << "\n";
  os << "field " << t.field << "\n";
  os << "generators " << t.generators << "\n";
  os << "rank " << t.rank << "\n";
  os << "torsion " << t.torsion << "\n";
  os << "z " << t.z << "\n";
  for (const auto& [gh, d] : t.entries) os << "deg " << gh.first << " " << gh.second << " " << d.str() << "\n";
  return os.str();
}

inline DegreeTable parse_degree_table(const std::string& text, const std::string& origin = "<string>") {
  DegreeTable t;
  t.provenance = Provenance::File;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  bool seen_field = false, seen_gens = false, seen_rank = false, seen_torsion = false, seen_z = false;
  bool in_header_comments = true;
  auto fail = [&](const std::string& msg) {
    throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": " + msg);
  };
  auto parse_u64 = [&](const std::string& s) -> u64 {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) fail("expected a positive integer, got '" + s + "'");
    return std::stoull(s);
  };
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (in_header_comments) t.comments.push_back(line);
      continue;
    }
    in_header_comments = false;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    std::string rest;
    std::getline(ls, rest);
    rest = detail::strip_spaces(rest);
    if (key == "field") {
      t.field = rest;
      seen_field = true;
    } else if (key == "generators") {
      t.generators = rest;
      seen_gens = true;
    } else if (key == "rank") {
      t.rank = static_cast<int>(parse_u64(rest));
      seen_rank = true;
    } else if (key == "torsion") {
      t.torsion = parse_u64(rest);
      seen_torsion = true;
    } else if (key == "z") {
      t.z = parse_u64(rest);
      seen_z = true;
    } else if (key == "deg") {
      std::istringstream ds(line.substr(3));
      std::string gs, hs, vs, extra;
      if (!(ds >> gs >> hs >> vs) || (ds >> extra)) fail("expected 'deg <g> <h> <value>'");
      u64 g = parse_u64(gs), h = parse_u64(hs);
      if (vs.empty() || vs.find_first_not_of("0123456789") != std::string::npos) fail("bad degree value '" + vs + "'");
      if (!t.entries.emplace(std::make_pair(g, h), BigInt(vs)).second) fail("duplicate entry (" + gs + "," + hs + ")");
    } else {
      fail("unknown key '" + key + "'");
    }
  }
  if (!seen_field || !seen_gens || !seen_rank || !seen_torsion || !seen_z)
    throw std::invalid_argument(origin + ": missing header line (need field, generators, rank, torsion, z)");
  validate(t);
  return t;
}

inline DegreeTable load_degree_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open degree table '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_degree_table(ss.str(), path);
}

inline void save_degree_table(const DegreeTable& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write degree table '" + path + "'");
  out << serialize(t);
}

}  // namespace divord
