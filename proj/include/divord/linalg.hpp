#pragma once

// Small integer linear algebra over Z and over the local rings Z/ell^e.

#include <cstdlib>
#include <stdexcept>
#include <utility>
#include <vector>

#include "divord/arith.hpp"

namespace divord {

template <class T>
using Matrix = std::vector<std::vector<T>>;

/// Rank over Q via fraction-free elimination.
inline std::size_t integer_rank(Matrix<BigInt> a) {
  if (a.empty()) return 0;
  const std::size_t rows = a.size(), cols = a[0].size();
  std::size_t rank = 0;
  BigInt prev = 1;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[rank]);
    for (std::size_t i = rank + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j)
        a[i][j] = (a[rank][c] * a[i][j] - a[i][c] * a[rank][j]) / prev;
      a[i][c] = 0;
    }
    prev = a[rank][c];
    ++rank;
  }
  return rank;
}

/// Nonzero Smith invariants s_1 | s_2 | ... of an integer matrix.
inline std::vector<BigInt> smith_invariants(Matrix<BigInt> a) {
  std::vector<BigInt> out;
  if (a.empty() || a[0].empty()) return out;
  const std::size_t rows = a.size(), cols = a[0].size();
  using boost::multiprecision::abs;
  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    for (;;) {
      // smallest nonzero entry of the trailing block becomes the pivot
      std::size_t pr = rows, pc = cols;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (a[i][j] != 0 && (pr == rows || abs(a[i][j]) < abs(a[pr][pc]))) {
            pr = i;
            pc = j;
          }
      if (pr == rows) return out;
      std::swap(a[t], a[pr]);
      for (auto& row : a) std::swap(row[t], row[pc]);
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        BigInt q = a[i][t] / a[t][t];
        if (q != 0)
          for (std::size_t j = t; j < cols; ++j) a[i][j] -= q * a[t][j];
        if (a[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        BigInt q = a[t][j] / a[t][t];
        if (q != 0)
          for (std::size_t i = t; i < rows; ++i) a[i][j] -= q * a[i][t];
        if (a[t][j] != 0) clean = false;
      }
      if (!clean) continue;
      // divisibility of the remaining block by the pivot
      bool divides = true;
      for (std::size_t i = t + 1; i < rows && divides; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (a[i][j] % a[t][t] != 0) {
            for (std::size_t k = t; k < cols; ++k) a[t][k] += a[i][k];
            divides = false;
            break;
          }
      if (divides) break;
    }
    out.push_back(abs(a[t][t]));
  }
  return out;
}

/// log_ell of the number of solutions x in (Z/ell^e)^cols of A x = 0 (mod ell^e).
/// Elimination with minimal-valuation pivots; ell^e must fit in 62 bits.
inline int kernel_log_size_mod_prime_power(const Matrix<i64>& a_in, u64 ell, int e, std::size_t cols) {
  if (e == 0) return 0;
  const u64 q = ipow(ell, static_cast<unsigned>(e));
  auto reduce = [&](i64 v) {
    i64 r = v % static_cast<i64>(q);
    return static_cast<u64>(r < 0 ? r + static_cast<i64>(q) : r);
  };
  Matrix<u64> a;
  for (const auto& row : a_in) {
    if (row.size() != cols) throw std::invalid_argument("ragged matrix");
    std::vector<u64> r(cols);
    for (std::size_t j = 0; j < cols; ++j) r[j] = reduce(row[j]);
    a.push_back(std::move(r));
  }
  auto val = [&](u64 v) {
    if (v == 0) return e;
    int k = 0;
    while (v % ell == 0) {
      v /= ell;
      ++k;
    }
    return k;
  };
  const std::size_t rows = a.size();
  int log_size = 0;
  std::size_t t = 0;
  for (; t < std::min(rows, cols); ++t) {
    std::size_t pr = rows, pc = cols;
    int best = e;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j) {
        int v = val(a[i][j]);
        if (v < best) {
          best = v;
          pr = i;
          pc = j;
        }
      }
    if (pr == rows) break;
    std::swap(a[t], a[pr]);
    for (auto& row : a) std::swap(row[t], row[pc]);
    // pivot = ell^best * unit
    const u64 pk = ipow(ell, static_cast<unsigned>(best));
    const u64 unit = a[t][t] / pk;
    const u64 unit_inv = inv_mod(unit % q, q);
    for (std::size_t i = t + 1; i < rows; ++i) {
      if (a[i][t] == 0) continue;
      u64 f = mul_mod(a[i][t] / pk, unit_inv, q);
      for (std::size_t j = t; j < cols; ++j) a[i][j] = (a[i][j] + q - mul_mod(f, a[t][j], q)) % q;
    }
    for (std::size_t j = t + 1; j < cols; ++j) {
      if (a[t][j] == 0) continue;
      u64 f = mul_mod(a[t][j] / pk, unit_inv, q);
      for (std::size_t i = t; i < rows; ++i) a[i][j] = (a[i][j] + q - mul_mod(f, a[i][t], q)) % q;
    }
    log_size += best;
  }
  // unpivoted columns are free
  log_size += static_cast<int>(cols - t) * e;
  return log_size;
}

}  // namespace divord
