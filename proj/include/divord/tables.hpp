#pragma once

// Degree-table resolution (native over Q, bundled files otherwise) and
// regeneration of the eight reference density tables cell by cell.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "divord/density.hpp"
#include "divord/group.hpp"
#include "divord/kummer.hpp"
#include "divord/reference_tables.hpp"

namespace divord {

#ifdef DIVORD_DATA_DIR
inline const std::string kDefaultTablesDir = std::string(DIVORD_DATA_DIR) + "/tables";
#else
inline const std::string kDefaultTablesDir = "data/tables";
#endif

/// Every degree table found in `dir`, keyed by (field label, generators).
/// Files are validated on load; a malformed file is a hard error.
inline std::map<std::pair<std::string, std::string>, DegreeTable> load_table_directory(const std::string& dir) {
  std::map<std::pair<std::string, std::string>, DegreeTable> out;
  if (!std::filesystem::is_directory(dir)) return out;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".deg") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    DegreeTable t = load_degree_table(f.string());
    out.emplace(std::make_pair(t.field, t.generators), std::move(t));
  }
  return out;
}

/// File name used for a bundled table: field and generators joined by '_'.
inline std::string bundled_file_name(const std::string& field, const std::string& generators) {
  std::string name = field + "_";
  for (char c : generators) name += c == ',' ? '_' : c;
  return name + ".deg";
}

/// The degree table of the torsion-free part of G with G's torsion order:
/// native over Q, otherwise the bundled file in `dir`.
inline DegreeTable resolve_degree_table(const GroupSpec& g, const std::string& dir = kDefaultTablesDir) {
  if (g.field().is_rational()) return compute_degree_table_Q(g);
  const std::string path = dir + "/" + bundled_file_name(g.field().label(), g.generators_joined());
  if (!std::filesystem::exists(path))
    throw std::runtime_error("no degree table for field " + g.field().label() + ", generators " + g.generators_joined() +
                             " (expected " + path + ")");
  DegreeTable t = load_degree_table(path);
  if (t.field != g.field().label() || t.generators != g.generators_joined())
    throw std::runtime_error(path + ": header names field " + t.field + ", generators " + t.generators);
  t.torsion = g.torsion();
  return t;
}

/// (field, generators) of every group appearing in the non-Q reference tables.
inline std::vector<std::pair<std::string, std::string>> reference_groups() {
  std::set<std::pair<std::string, std::string>> seen;
  std::vector<std::pair<std::string, std::string>> out;
  auto add = [&](const std::string& field, const std::string& gens) {
    if (field != "Q" && seen.insert({field, gens}).second) out.emplace_back(field, gens);
  };
  for (const auto& t : reference::rho_tables())
    for (const auto& row : t.rows) add(t.field, row.generators);
  for (const auto& t : reference::beta_tables())
    for (const auto& row : t.rows) add(t.field, row.generators);
  for (const auto& row : reference::gamma_table().rows) add(reference::gamma_table().field, row.generators);
  return out;
}

/// One regenerated cell of a reference table.
struct TableCell {
  int table = 0;
  std::string field;
  std::string group;
  std::string column;    // e.g. "rho_12", "beta_3", "A(2,1)", "gamma_6,9"
  std::string computed;  // exact rational, or decimal for constants
  std::string expected;
  std::string decimal_computed;  // decimals for beta cells
  std::string decimal_expected;
  bool match = false;
};

namespace detail {

// Rounds v to the number of decimals shown in `like`.
inline std::string round_like(long double v, const std::string& like) {
  auto dot = like.find('.');
  int places = dot == std::string::npos ? 0 : static_cast<int>(like.size() - dot - 1);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*Lf", places, v);
  return buf;
}

// Truncates v to the number of decimals shown in `like`.
inline std::string truncate_like(long double v, const std::string& like) {
  auto dot = like.find('.');
  int places = dot == std::string::npos ? 0 : static_cast<int>(like.size() - dot - 1);
  long double scale = std::pow(10.0L, places);
  return round_like(std::floor(v * scale) / scale, like);
}

}  // namespace detail

/// Regenerates reference table `id` (1..8). Tables over fields other than Q
/// read their degree tables from `dir`.
inline std::vector<TableCell> regenerate_table(int id, const std::string& dir = kDefaultTablesDir) {
  std::vector<TableCell> cells;
  auto group_of = [](const std::string& field, const std::string& gens) {
    return GroupSpec(FieldSpec::builtin(field), GroupSpec::split_generators(gens));
  };
  for (const auto& t : reference::rho_tables()) {
    if (t.id != id) continue;
    for (const auto& row : t.rows) {
      DegreeTable deg = resolve_degree_table(group_of(t.field, row.generators), dir);
      for (std::size_t i = 0; i < t.moduli.size(); ++i) {
        TableCell c{id, t.field, row.generators, "rho_" + std::to_string(t.moduli[i])};
        c.computed = to_string(*rho_closed(t.moduli[i], deg).exact);
        c.expected = row.values[i];
        c.match = c.computed == c.expected;
        cells.push_back(std::move(c));
      }
    }
    return cells;
  }
  if (id == 5) {
    for (const auto& row : reference::constant_table()) {
      for (std::size_t i = 0; i < row.values.size(); ++i) {
        const int k = static_cast<int>(i) + 2;
        TableCell c{id, "-", "r=" + std::to_string(row.r), "A(" + std::to_string(k) + "," + std::to_string(row.r) + ")"};
        c.computed = detail::round_like(A_constant(k, row.r, 100000).value, row.values[i]);
        c.expected = row.values[i];
        c.match = c.computed == c.expected;
        cells.push_back(std::move(c));
      }
    }
    return cells;
  }
  for (const auto& t : reference::beta_tables()) {
    if (t.id != id) continue;
    for (const auto& row : t.rows) {
      DegreeTable deg = resolve_degree_table(group_of(t.field, row.generators), dir);
      for (std::size_t i = 0; i < t.ks.size(); ++i) {
        DensityValue v = beta_closed(t.ks[i], deg);
        TableCell c{id, t.field, row.generators, "beta_" + std::to_string(t.ks[i])};
        c.computed = to_string(v.scaled->q);
        c.expected = row.multipliers[i];
        // the printed last digit may be rounded or truncated
        c.decimal_computed = detail::round_like(v.scaled->approx, row.decimals[i]);
        c.decimal_expected = row.decimals[i];
        const bool decimal_ok = c.decimal_computed == c.decimal_expected ||
                                detail::truncate_like(v.scaled->approx, row.decimals[i]) == c.decimal_expected;
        c.match = c.computed == c.expected && decimal_ok && v.scaled->r == row.rank;
        cells.push_back(std::move(c));
      }
    }
    return cells;
  }
  if (id == 8) {
    const auto& t = reference::gamma_table();
    for (const auto& row : t.rows) {
      DegreeTable deg = resolve_degree_table(group_of(t.field, row.generators), dir);
      for (std::size_t i = 0; i < t.ms.size(); ++i) {
        TableCell c{id, t.field, row.generators, "gamma_" + std::to_string(t.k) + "," + std::to_string(t.ms[i])};
        c.computed = to_string(*gamma_closed(t.k, t.ms[i], deg).exact);
        c.expected = row.values[i];
        c.match = c.computed == c.expected;
        cells.push_back(std::move(c));
      }
    }
    return cells;
  }
  throw std::invalid_argument("unknown table " + std::to_string(id) + " (tables are numbered 1..8)");
}

}  // namespace divord
