#pragma once

// Finitely generated subgroups G of K^x: a torsion-free part given by explicit
// generators plus an optional cyclic torsion part of order t.

#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "divord/arith.hpp"
#include "divord/field.hpp"
#include "divord/linalg.hpp"

namespace divord {

class GroupSpec {
 public:
  GroupSpec() = default;

  /// Builds G from generator strings. Generators that are roots of unity form
  /// the torsion part; `declared_torsion` (if > 1) is folded in as well.
  GroupSpec(FieldSpec field, const std::vector<std::string>& generators, u64 declared_torsion = 1)
      : field_(std::move(field)) {
    if (declared_torsion == 0) throw std::invalid_argument("torsion order must be >= 1");
    torsion_ = declared_torsion;
    for (const auto& g : generators) {
      Element e = field_.parse_element(g);
      if (e == field_.zero()) throw std::domain_error("generator '" + g + "' is zero");
      u64 ord = field_.root_of_unity_order(e);
      if (ord == 1) throw std::domain_error("generator '" + g + "' is trivial");
      if (ord != 0) {
        torsion_ = std::lcm(torsion_, ord);
        torsion_elements_.push_back(e);
        continue;
      }
      generators_.push_back(e);
      generator_strings_.push_back(field_.element_string(e));
    }
    if (generators_.empty()) throw std::domain_error("group needs at least one generator of infinite order");
    if (auto w = field_.roots_of_unity_count(); w && *w % torsion_ != 0)
      throw std::domain_error("K contains no root of unity of order " + std::to_string(torsion_));
    if (torsion_ > 1) {
      if (auto w = field_.roots_of_unity_count(); w) {
        torsion_element_ = field_.pow(*field_.root_of_unity_generator(), *w / torsion_);
      } else if (torsion_elements_.size() == 1 && field_.root_of_unity_order(torsion_elements_[0]) == torsion_) {
        torsion_element_ = torsion_elements_[0];
      } else {
        throw std::domain_error("cannot realize the torsion part over a field without known roots of unity");
      }
    }
    if (field_.is_rational()) check_independent_over_Q();
  }

  static std::vector<std::string> split_generators(const std::string& list) {
    std::vector<std::string> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = detail::strip_spaces(item);
      if (!item.empty()) out.push_back(item);
    }
    if (out.empty()) throw std::invalid_argument("empty generator list");
    return out;
  }

  const FieldSpec& field() const { return field_; }
  const std::vector<Element>& generators() const { return generators_; }
  const std::vector<std::string>& generator_strings() const { return generator_strings_; }
  int rank() const { return static_cast<int>(generators_.size()); }
  u64 torsion() const { return torsion_; }
  /// A generator of the torsion part, when t > 1.
  const std::optional<Element>& torsion_element() const { return torsion_element_; }

  /// Every element whose reduction generates G mod p: the free generators and
  /// the torsion generator.
  std::vector<Element> all_elements() const {
    std::vector<Element> out = generators_;
    if (torsion_element_) out.push_back(*torsion_element_);
    return out;
  }

  std::string generators_joined() const {
    std::string out;
    for (const auto& s : generator_strings_) out += (out.empty() ? "" : ",") + s;
    return out;
  }

  /// Integer exponent matrix over Q: rows are primes, columns generators.
  /// Requires every generator to be a positive rational.
  std::vector<u64> support_primes() const {
    std::set<u64> ps;
    for (const auto& g : generators_) {
      const Rat& q = g[0];
      for (BigInt v : {numerator(q), denominator(q)})
        for (u64 p : prime_factors(to_u64(v))) ps.insert(p);
    }
    return {ps.begin(), ps.end()};
  }

  Matrix<BigInt> exponent_matrix_Q() const {
    auto primes = support_primes();
    Matrix<BigInt> e(primes.size(), std::vector<BigInt>(generators_.size(), 0));
    for (std::size_t j = 0; j < generators_.size(); ++j) {
      const Rat& q = generators_[j][0];
      auto num = factorize_u64(to_u64(numerator(q)));
      auto den = factorize_u64(to_u64(denominator(q)));
      for (std::size_t i = 0; i < primes.size(); ++i)
        e[i][j] = num.exponent(primes[i]) - den.exponent(primes[i]);
    }
    return e;
  }

 private:
  static u64 to_u64(const BigInt& v) {
    BigInt a = v < 0 ? BigInt(-v) : v;
    if (a > BigInt(UINT64_MAX)) throw std::domain_error("generator component exceeds 64 bits");
    return a.convert_to<u64>();
  }

  void check_independent_over_Q() const {
    for (std::size_t j = 0; j < generators_.size(); ++j)
      if (generators_[j][0] < 0)
        throw std::domain_error("generator '" + generator_strings_[j] +
                                "' is negative; the native Q path accepts positive generators (use -1 as torsion)");
    if (integer_rank(exponent_matrix_Q()) != generators_.size())
      throw std::domain_error("generators are multiplicatively dependent");
  }

  FieldSpec field_;
  std::vector<Element> generators_;
  std::vector<std::string> generator_strings_;
  std::vector<Element> torsion_elements_;
  std::optional<Element> torsion_element_;
  u64 torsion_ = 1;
};

}  // namespace divord
