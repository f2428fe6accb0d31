#pragma once

// Number fields K = Q[a]/(f) for monic integer f, and their elements as
// coefficient vectors in the power basis 1, a, ..., a^(d-1).

#include <cctype>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "divord/arith.hpp"

namespace divord {

/// Integer polynomial, coefficients low degree first.
using IntPoly = std::vector<BigInt>;
/// Field element in the power basis; always of length deg f.
using Element = std::vector<Rat>;

namespace detail {

inline void trim(IntPoly& p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
}

inline std::string poly_to_string(const IntPoly& p, char var) {
  std::string out;
  for (std::size_t i = p.size(); i-- > 0;) {
    const BigInt& c = p[i];
    if (c == 0) continue;
    BigInt a = c < 0 ? BigInt(-c) : c;
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? "-" : "+";
    }
    if (i == 0 || a != 1) out += a.str();
    if (i >= 1) out += var;
    if (i >= 2) out += "^" + std::to_string(i);
  }
  return out.empty() ? "0" : out;
}

inline std::string strip_spaces(const std::string& s) {
  std::string out;
  for (char ch : s)
    if (!std::isspace(static_cast<unsigned char>(ch))) out += ch;
  return out;
}

// Parses a sum of terms c, c*v, c v^k, v^k with rational c into a map degree -> coefficient.
inline std::map<int, Rat> parse_terms(const std::string& text, char var) {
  const std::string s = strip_spaces(text);
  if (s.empty()) throw std::invalid_argument("empty polynomial");
  std::map<int, Rat> out;
  std::size_t i = 0;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else if (i != 0) {
      throw std::invalid_argument("expected '+' or '-' at column " + std::to_string(i + 1) + " in '" + s + "'");
    }
    std::size_t start = i;
    while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '/')) ++i;
    Rat coef = 1;
    bool has_coef = i > start;
    if (has_coef) coef = parse_rat(s.substr(start, i - start));
    int degree = 0;
    if (i < s.size() && s[i] == '*') {
      if (!has_coef) throw std::invalid_argument("dangling '*' in '" + s + "'");
      ++i;
      if (i >= s.size() || s[i] != var) throw std::invalid_argument("expected '" + std::string(1, var) + "' after '*' in '" + s + "'");
    }
    if (i < s.size() && s[i] == var) {
      ++i;
      degree = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        std::size_t e0 = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == e0) throw std::invalid_argument("missing exponent in '" + s + "'");
        degree = std::stoi(s.substr(e0, i - e0));
      }
    } else if (!has_coef) {
      throw std::invalid_argument("unexpected character at column " + std::to_string(i + 1) + " in '" + s + "'");
    }
    out[degree] += sign * coef;
  }
  return out;
}

// Determinant over Q by Gaussian elimination.
inline Rat determinant(std::vector<std::vector<Rat>> a) {
  const std::size_t n = a.size();
  Rat det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a[piv][c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a[i][c] == 0) continue;
      Rat f = a[i][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  return det;
}

}  // namespace detail

class FieldSpec {
 public:
  FieldSpec() : FieldSpec("Q", IntPoly{0, 1}) {}

  /// `poly` is monic, low degree first; irreducibility is verified up to degree 4.
  FieldSpec(std::string label, IntPoly poly) : label_(std::move(label)), f_(std::move(poly)) {
    detail::trim(f_);
    if (f_.size() < 2 || f_.back() != 1) throw std::invalid_argument("defining polynomial must be monic of degree >= 1");
    if (degree() <= 4 && !irreducible_small())
      throw std::invalid_argument("defining polynomial " + poly_string() + " is reducible over Q");
    compute_discriminant();
  }

  static FieldSpec builtin(const std::string& label) {
    if (label == "Q") return FieldSpec("Q", {0, 1});
    if (label == "Qzeta3") return FieldSpec("Qzeta3", {1, 1, 1});
    if (label == "Qzeta4") return FieldSpec("Qzeta4", {1, 0, 1});
    if (label == "Qzeta12") return FieldSpec("Qzeta12", {1, 0, -1, 0, 1});
    if (label == "Qsqrtm5") return FieldSpec("Qsqrtm5", {5, 0, 1});
    throw std::invalid_argument("unknown field label '" + label + "' (built-ins: Q, Qzeta3, Qzeta4, Qzeta12, Qsqrtm5)");
  }
  static bool is_builtin(const std::string& label) {
    return label == "Q" || label == "Qzeta3" || label == "Qzeta4" || label == "Qzeta12" || label == "Qsqrtm5";
  }

  /// Parses a polynomial in x such as "x^2+5".
  static FieldSpec from_poly_string(const std::string& label, const std::string& text) {
    auto terms = detail::parse_terms(text, 'x');
    int deg = terms.empty() ? 0 : terms.rbegin()->first;
    IntPoly p(static_cast<std::size_t>(deg) + 1, 0);
    for (auto& [k, c] : terms) {
      if (denominator(c) != 1) throw std::invalid_argument("defining polynomial must have integer coefficients");
      p[static_cast<std::size_t>(k)] = numerator(c);
    }
    return FieldSpec(label, p);
  }

  const std::string& label() const { return label_; }
  const IntPoly& poly() const { return f_; }
  int degree() const { return static_cast<int>(f_.size()) - 1; }
  bool is_rational() const { return degree() == 1; }
  const BigInt& discriminant() const { return disc_; }
  std::string poly_string() const { return detail::poly_to_string(f_, 'x'); }

  /// Number of roots of unity in K when known (built-ins), otherwise nullopt.
  std::optional<u64> roots_of_unity_count() const {
    if (label_ == "Q" || label_ == "Qsqrtm5") return 2;
    if (label_ == "Qzeta3") return 6;
    if (label_ == "Qzeta4") return 4;
    if (label_ == "Qzeta12") return 12;
    if (is_rational()) return 2;
    return std::nullopt;
  }

  /// A generator of the roots of unity of K when known (built-ins).
  std::optional<std::vector<Rat>> root_of_unity_generator() const {
    auto c = [](std::initializer_list<int> v) {
      std::vector<Rat> out;
      for (int x : v) out.emplace_back(x);
      return out;
    };
    if (label_ == "Q" || is_rational()) return c({-1});
    if (label_ == "Qsqrtm5") return c({-1, 0});
    if (label_ == "Qzeta3") return c({0, -1});  // -a has order 6
    if (label_ == "Qzeta4") return c({0, 1});
    if (label_ == "Qzeta12") return c({0, 1, 0, 0});
    return std::nullopt;
  }

  // ---- element arithmetic -------------------------------------------------

  Element zero() const { return Element(static_cast<std::size_t>(degree()), Rat(0)); }
  Element one() const {
    Element e = zero();
    e[0] = 1;
    return e;
  }
  Element from_rat(const Rat& q) const {
    Element e = zero();
    e[0] = q;
    return e;
  }

  /// Reduces an arbitrary-degree rational polynomial in a modulo f.
  Element reduce(std::vector<Rat> c) const {
    const std::size_t d = static_cast<std::size_t>(degree());
    for (std::size_t i = c.size(); i-- > d;) {
      if (c[i] == 0) continue;
      Rat lead = c[i];
      for (std::size_t j = 0; j < d; ++j) c[i - d + j] -= lead * Rat(f_[j]);
      c[i] = 0;
    }
    c.resize(d, Rat(0));
    return c;
  }

  Element mul(const Element& x, const Element& y) const {
    std::vector<Rat> prod(x.size() + y.size(), Rat(0));
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < y.size(); ++j) prod[i + j] += x[i] * y[j];
    }
    return reduce(prod);
  }

  Element pow(Element x, u64 e) const {
    Element r = one();
    while (e) {
      if (e & 1) r = mul(r, x);
      x = mul(x, x);
      e >>= 1;
    }
    return r;
  }

  /// Parses an element written as a polynomial in a, e.g. "2a", "1/2", "a^2-3".
  Element parse_element(const std::string& text) const {
    auto terms = detail::parse_terms(text, 'a');
    int top = terms.empty() ? 0 : terms.rbegin()->first;
    std::vector<Rat> c(static_cast<std::size_t>(std::max(top + 1, degree())), Rat(0));
    for (auto& [k, v] : terms) c[static_cast<std::size_t>(k)] += v;
    return reduce(c);
  }

  std::string element_string(const Element& x) const {
    std::string out;
    for (std::size_t i = x.size(); i-- > 0;) {
      const Rat& c = x[i];
      if (c == 0) continue;
      Rat a = c < 0 ? Rat(-c) : c;
      if (out.empty()) {
        if (c < 0) out += "-";
      } else {
        out += c < 0 ? "-" : "+";
      }
      if (i == 0 || a != 1) out += to_string(a);
      if (i >= 1) out += "a";
      if (i >= 2) out += "^" + std::to_string(i);
    }
    return out.empty() ? "0" : out;
  }

  bool is_rational_element(const Element& x) const {
    for (std::size_t i = 1; i < x.size(); ++i)
      if (x[i] != 0) return false;
    return true;
  }

  /// N_{K/Q}(x) as the determinant of multiplication by x.
  Rat norm(const Element& x) const {
    const std::size_t d = static_cast<std::size_t>(degree());
    std::vector<std::vector<Rat>> m(d, std::vector<Rat>(d));
    Element basis = one();
    Element gen = zero();
    if (d > 1) gen[1] = 1;
    for (std::size_t j = 0; j < d; ++j) {
      Element col = mul(x, basis);
      for (std::size_t i = 0; i < d; ++i) m[i][j] = col[i];
      if (d > 1) basis = mul(basis, gen);
    }
    return detail::determinant(std::move(m));
  }

  /// Order of x as a root of unity, or 0 when x is not one.
  u64 root_of_unity_order(const Element& x) const {
    Rat n = norm(x);
    if (n != 1 && n != -1) return 0;
    Element p = x;
    for (u64 k = 1; k <= 120; ++k) {
      if (p == one()) return k;
      p = mul(p, x);
    }
    return 0;
  }

 private:
  bool irreducible_small() const {
    const int d = degree();
    if (d == 1) return true;
    // rational roots of a monic integer polynomial are integer divisors of f(0)
    if (f_[0] == 0) return false;
    BigInt c0 = f_[0] < 0 ? BigInt(-f_[0]) : f_[0];
    std::vector<BigInt> cands;
    if (c0 <= BigInt(UINT64_MAX)) {
      for (u64 t : divisors(c0.convert_to<u64>())) {
        cands.push_back(BigInt(t));
        cands.push_back(-BigInt(t));
      }
    } else {
      throw std::invalid_argument("constant term too large for the irreducibility check");
    }
    auto eval = [&](const BigInt& x) {
      BigInt v = 0;
      for (std::size_t i = f_.size(); i-- > 0;) v = v * x + f_[i];
      return v;
    };
    for (const auto& t : cands)
      if (eval(t) == 0) return false;
    if (d <= 3) return true;
    // degree 4: no split into two monic integer quadratics (x^2+px+q)(x^2+sx+t)
    const BigInt& c1 = f_[1];
    const BigInt& c2 = f_[2];
    const BigInt& c3 = f_[3];
    for (const auto& q : cands) {
      BigInt t = f_[0] / q;
      if (q * t != f_[0]) continue;
      if (t != q) {
        // p(t - q) = c1 - q*c3
        BigInt num = c1 - q * c3, den = t - q;
        if (num % den != 0) continue;
        BigInt p = num / den, s = c3 - p;
        if (q + t + p * s == c2) return false;
      } else {
        if (c1 != q * c3) continue;
        // p + s = c3, p*s = c2 - 2q
        BigInt disc = c3 * c3 - 4 * (c2 - 2 * q);
        if (disc < 0) continue;
        BigInt r = boost::multiprecision::sqrt(disc);
        if (r * r == disc && (c3 + r) % 2 == 0) return false;
      }
    }
    return true;
  }

  void compute_discriminant() {
    const int d = degree();
    if (d == 1) {
      disc_ = 1;
      return;
    }
    // disc(f) = (-1)^(d(d-1)/2) N(f'(a))
    std::vector<Rat> deriv(static_cast<std::size_t>(d), Rat(0));
    for (int i = 1; i <= d; ++i) deriv[static_cast<std::size_t>(i - 1)] = Rat(f_[static_cast<std::size_t>(i)] * i);
    Rat n = norm(reduce(deriv));
    if ((d * (d - 1) / 2) % 2) n = -n;
    disc_ = numerator(n);
  }

  std::string label_;
  IntPoly f_;
  BigInt disc_ = 1;
};

}  // namespace divord
