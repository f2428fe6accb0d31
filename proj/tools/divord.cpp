// divord: densities of primes whose reduction order satisfies divisibility
// conditions, exact and empirical.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "divord/density.hpp"
#include "divord/empirical.hpp"
#include "divord/group.hpp"
#include "divord/kummer.hpp"
#include "divord/tables.hpp"
#include "divord/tabulate.hpp"

using namespace divord;

namespace {

struct Options {
  std::string format = "text";
  std::string tables_dir = kDefaultTablesDir;
  std::string config;
  std::string field = "Q";
  std::string field_poly;
  std::string group;
  u64 torsion = 1;
  std::string table_file;
  bool tabulate = false;
  u64 m = 0, n = 0, k = 0;
  std::string event;
  std::string x = "1e6";
  double tolerance = 0.01;
  unsigned threads = 0;
  std::string out;
  std::string which = "all";
  u64 series_bound = 0;
  std::string verify_x;
};

// A flat list of records rendered in the selected output format.
struct Report {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> text_lines;  // preferred text rendering when present

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }

  static std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
  }

  void print(const std::string& format, std::ostream& os) const {
    if (format == "csv") {
      for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << csv_quote(columns[i]);
      os << "\n";
      for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_quote(r[i]);
        os << "\n";
      }
    } else if (format == "json") {
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (const auto& r : rows) {
        nlohmann::ordered_json obj;
        for (std::size_t i = 0; i < columns.size(); ++i) obj[columns[i]] = r[i];
        arr.push_back(obj);
      }
      os << arr.dump(2) << "\n";
    } else if (!text_lines.empty()) {
      for (const auto& l : text_lines) os << l << "\n";
    } else {
      std::vector<std::size_t> width(columns.size());
      for (std::size_t i = 0; i < columns.size(); ++i) width[i] = columns[i].size();
      for (const auto& r : rows)
        for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
      auto line = [&](const std::vector<std::string>& r) {
        std::string s;
        for (std::size_t i = 0; i < r.size(); ++i) {
          s += r[i];
          if (i + 1 < r.size()) s += std::string(width[i] - r[i].size() + 2, ' ');
        }
        os << s << "\n";
      };
      line(columns);
      for (const auto& r : rows) line(r);
    }
  }
};

std::string fixed(long double v, int places = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*Lf", places, v);
  return buf;
}

std::string scientific(long double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3Le", v);
  return buf;
}

u64 parse_bound(const std::string& s) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad bound '" + s + "'");
  }
  if (pos != s.size() || !(v >= 1) || v != std::floor(v) || v >= 4294967296.0)
    throw std::invalid_argument("bad bound '" + s + "' (need an integer in [1, 2^32))");
  return static_cast<u64>(v);
}

// Config file: one `key value` pair per line, '#' comments. Keys are the long
// option names (field, field-poly, generators or group, torsion, table, m, k,
// n, event, x, tolerance, threads).
void apply_config(const std::string& path, Options& o, const std::map<std::string, bool>& given) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  std::string line;
  int lineno = 0;
  auto fail = [&](int col, const std::string& msg) {
    throw std::invalid_argument(path + ":" + std::to_string(lineno) + ":" + std::to_string(col) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    auto key_end = line.find_first_of(" \t", first);
    if (key_end == std::string::npos) fail(static_cast<int>(first) + 1, "missing value");
    std::string key = line.substr(first, key_end - first);
    auto vstart = line.find_first_not_of(" \t", key_end);
    if (vstart == std::string::npos) fail(static_cast<int>(key_end) + 1, "missing value");
    std::string value = detail::strip_spaces(line.substr(vstart));
    const int col = static_cast<int>(vstart) + 1;
    if (given.count(key) && given.at(key)) continue;  // command line wins
    auto to_u64 = [&](const std::string& v) -> u64 {
      if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) fail(col, "expected an integer, got '" + v + "'");
      return std::stoull(v);
    };
    if (key == "field") o.field = value;
    else if (key == "field-poly") o.field_poly = value;
    else if (key == "generators" || key == "group") o.group = value;
    else if (key == "torsion") o.torsion = to_u64(value);
    else if (key == "rank" || key == "z") continue;
    else if (key == "table") o.table_file = value;
    else if (key == "m") o.m = to_u64(value);
    else if (key == "n") o.n = to_u64(value);
    else if (key == "k") o.k = to_u64(value);
    else if (key == "event") o.event = value;
    else if (key == "x") o.x = value;
    else if (key == "tolerance") o.tolerance = std::stod(value);
    else if (key == "threads") o.threads = static_cast<unsigned>(to_u64(value));
    else fail(static_cast<int>(first) + 1, "unknown key '" + key + "'");
  }
}

FieldSpec make_field(const Options& o) {
  if (!o.field_poly.empty()) return FieldSpec::from_poly_string(o.field, o.field_poly);
  return FieldSpec::builtin(o.field);
}

GroupSpec make_group(const Options& o) {
  if (o.group.empty()) throw std::invalid_argument("--group is required");
  return GroupSpec(make_field(o), GroupSpec::split_generators(o.group), o.torsion);
}

DegreeTable make_table(const GroupSpec& g, const Options& o) {
  if (!o.table_file.empty()) {
    DegreeTable t = load_degree_table(o.table_file);
    if (t.field != g.field().label() || t.generators != g.generators_joined())
      throw std::runtime_error(o.table_file + ": table is for field " + t.field + ", generators " + t.generators);
    t.torsion = g.torsion();
    return t;
  }
  if (o.tabulate && !g.field().is_rational()) {
    DegreeTable t = tabulate_degree_table(g);
    t.torsion = g.torsion();
    return t;
  }
  return resolve_degree_table(g, o.tables_dir);
}

int cmd_density(const Options& o, Report& rep) {
  if (o.m == 0) throw std::invalid_argument("density: --m must be >= 1");
  GroupSpec g = make_group(o);
  DegreeTable t = make_table(g, o);
  DensityValue v = rho_closed(o.m, t);
  const Rat exact = *v.exact;
  rep.columns = {"field", "group", "m", "exact", "decimal"};
  std::vector<std::string> row{g.field().label(), g.generators_joined(), std::to_string(o.m), to_string(exact),
                               fixed(to_long_double(exact))};
  rep.text_lines.push_back(to_string(exact) + " ≈ " + fixed(to_long_double(exact)));
  if (o.series_bound) {
    DensityValue s = rho_series(o.m, t, FrobTrivial{}, o.series_bound);
    rep.columns.insert(rep.columns.end(), {"series_lower", "series_upper"});
    row.push_back(fixed(to_long_double(s.interval->first), 12));
    row.push_back(fixed(to_long_double(s.interval->second), 12));
    rep.text_lines.push_back("series [" + row[row.size() - 2] + ", " + row.back() + "]");
  }
  int status = 0;
  if (!o.verify_x.empty()) {
    const u64 X = parse_bound(o.verify_x);
    EmpiricalOptions eo;
    eo.threads = o.threads;
    EmpiricalCount c = count_event(g, Event::divisible(o.m), X, eo);
    long double d = std::fabs(static_cast<long double>(c.ratio()) - to_long_double(exact));
    const bool ok = c.defined() && d < o.tolerance;
    rep.columns.insert(rep.columns.end(), {"X", "empirical", "deviation", "status"});
    row.insert(row.end(), {std::to_string(X), c.defined() ? fixed(c.ratio()) : "undefined", fixed(d), ok ? "pass" : "warn"});
    rep.text_lines.push_back(c.record());
    rep.text_lines.push_back("deviation " + fixed(d) + " (tolerance " + fixed(o.tolerance, 4) + ") " + (ok ? "pass" : "warn"));
    if (!ok) status = 1;
  }
  rep.rows.push_back(row);
  return status;
}

int cmd_kfree(const Options& o, Report& rep) {
  if (o.k < 2) throw std::invalid_argument("kfree: --k must be >= 2");
  GroupSpec g = make_group(o);
  DegreeTable t = make_table(g, o);
  DensityValue v = beta_closed(static_cast<int>(o.k), t);
  const auto& s = *v.scaled;
  rep.columns = {"field", "group", "k", "multiplier", "constant", "decimal", "error_bound"};
  const std::string constant = "A(" + std::to_string(s.k) + "," + std::to_string(s.r) + ")";
  rep.rows.push_back({g.field().label(), g.generators_joined(), std::to_string(o.k), to_string(s.q), constant,
                      fixed(s.approx), scientific(s.error)});
  rep.text_lines.push_back(to_string(s.q) + " * " + constant + " ≈ " + fixed(s.approx));
  return 0;
}

int cmd_valuation(const Options& o, Report& rep) {
  if (o.k == 0 || o.m == 0) throw std::invalid_argument("valuation: --k and --m are required");
  GroupSpec g = make_group(o);
  DegreeTable t = make_table(g, o);
  const Rat v = *gamma_closed(o.k, o.m, t).exact;
  rep.columns = {"field", "group", "k", "m", "exact", "decimal"};
  rep.rows.push_back({g.field().label(), g.generators_joined(), std::to_string(o.k), std::to_string(o.m), to_string(v),
                      fixed(to_long_double(v))});
  rep.text_lines.push_back(to_string(v));
  return 0;
}

int cmd_coprime(const Options& o, Report& rep) {
  if (o.k == 0) throw std::invalid_argument("coprime: --k is required");
  GroupSpec g = make_group(o);
  DegreeTable t = make_table(g, o);
  const Rat v = *coprime_density(o.k, t).exact;
  rep.columns = {"field", "group", "k", "exact", "decimal"};
  rep.rows.push_back({g.field().label(), g.generators_joined(), std::to_string(o.k), to_string(v), fixed(to_long_double(v))});
  rep.text_lines.push_back(to_string(v));
  return 0;
}

int cmd_tables(const Options& o, Report& rep) {
  std::vector<int> ids;
  if (o.which == "all") {
    ids = {1, 2, 3, 4, 5, 6, 7, 8};
  } else {
    for (const auto& part : GroupSpec::split_generators(o.which)) {
      if (part.size() != 1 || part[0] < '1' || part[0] > '8') throw std::invalid_argument("tables: expected 1..8 or all, got '" + part + "'");
      ids.push_back(part[0] - '0');
    }
  }
  rep.columns = {"table", "field", "group", "cell", "computed", "expected", "decimal", "decimal_expected", "status"};
  int mismatches = 0;
  std::size_t total = 0;
  for (int id : ids) {
    for (const auto& c : regenerate_table(id, o.tables_dir)) {
      ++total;
      if (!c.match) ++mismatches;
      rep.add({std::to_string(c.table), c.field, c.group, c.column, c.computed, c.expected, c.decimal_computed,
               c.decimal_expected, c.match ? "match" : "MISMATCH"});
    }
  }
  if (o.format == "text") {
    Report body;
    body.columns = rep.columns;
    body.rows = rep.rows;
    std::ostringstream os;
    body.print("text", os);
    std::istringstream is(os.str());
    for (std::string l; std::getline(is, l);) rep.text_lines.push_back(l);
    rep.text_lines.push_back(std::to_string(total - mismatches) + "/" + std::to_string(total) + " cells match");
    for (const auto& r : rep.rows)
      if (r.back() != "match")
        rep.text_lines.push_back("mismatch: table " + r[0] + " " + r[1] + " <" + r[2] + "> " + r[3] + ": computed " + r[4] +
                                 " expected " + r[5]);
  }
  return mismatches ? 1 : 0;
}

// Exact value of an event's density, when the library has a formula for it.
std::optional<long double> exact_for_event(const Event& e, const GroupSpec& g, const DegreeTable& t, std::string& shown) {
  switch (e.kind) {
    case Event::Kind::Divisible: {
      Rat v = *rho_closed(e.a, t).exact;
      shown = to_string(v);
      return to_long_double(v);
    }
    case Event::Kind::KFree: {
      auto s = *beta_closed(static_cast<int>(e.a), t).scaled;
      shown = to_string(s.q) + " * A(" + std::to_string(s.k) + "," + std::to_string(s.r) + ")";
      return s.approx;
    }
    case Event::Kind::Valuation: {
      Rat v = *gamma_closed(e.a, e.b, t).exact;
      shown = to_string(v);
      return to_long_double(v);
    }
    case Event::Kind::Coprime: {
      Rat v = *coprime_density(e.a, t).exact;
      shown = to_string(v);
      return to_long_double(v);
    }
    case Event::Kind::KummerSplit: {
      if (g.torsion() > 1) return std::nullopt;
      BigInt d = lift_degree(t, e.a, e.b);
      shown = "1/" + d.str();
      return 1.0L / static_cast<long double>(d.convert_to<double>());
    }
  }
  return std::nullopt;
}

int cmd_verify(const Options& o, Report& rep) {
  if (o.event.empty()) throw std::invalid_argument("verify: --event is required");
  const Event e = Event::parse(o.event);
  GroupSpec g = make_group(o);
  const u64 X = parse_bound(o.x);
  if (X < 1000) throw std::invalid_argument("verify: X must be >= 1000");
  DegreeTable t = make_table(g, o);
  std::string shown;
  auto exact = exact_for_event(e, g, t, shown);
  EmpiricalOptions eo;
  eo.threads = o.threads;
  EmpiricalCount c = count_event(g, e, X, eo);
  rep.columns = {"field", "group", "event", "X", "matched", "total", "excluded", "ratio", "exact", "exact_decimal",
                 "deviation", "tolerance", "status"};
  std::string status = "pass";
  std::string dev = "-", exd = "-";
  if (!c.defined()) {
    status = "warn";
  } else if (exact) {
    long double d = std::fabs(static_cast<long double>(c.ratio()) - *exact);
    dev = fixed(d);
    exd = fixed(*exact);
    if (d >= o.tolerance) status = "warn";
  } else {
    shown = "-";
  }
  const std::string ratio = c.defined() ? fixed(c.ratio()) : "undefined";
  rep.rows.push_back({g.field().label(), g.generators_joined(), e.name(), std::to_string(X), std::to_string(c.matched),
                      std::to_string(c.total), std::to_string(c.excluded), ratio, shown, exd, dev, fixed(o.tolerance, 4),
                      status});
  rep.text_lines.push_back(c.record());
  rep.text_lines.push_back("exact " + shown + (exact ? " ≈ " + exd : ""));
  rep.text_lines.push_back("deviation " + dev + " (tolerance " + fixed(o.tolerance, 4) + ") " + status);
  return status == "pass" ? 0 : 1;
}

int cmd_tabulate(const Options& o, Report& rep) {
  std::vector<std::pair<std::string, std::string>> jobs;
  if (o.group.empty()) {
    jobs = reference_groups();
  } else {
    jobs.emplace_back(o.field, o.group);
  }
  rep.columns = {"field", "generators", "z", "entries", "path"};
  for (const auto& [field, gens] : jobs) {
    Options oo = o;
    oo.field = field;
    oo.group = gens;
    GroupSpec g = make_group(oo);
    GroupSpec free_part(g.field(), GroupSpec::split_generators(g.generators_joined()));
    DegreeTable t = g.field().is_rational() ? compute_degree_table_Q(free_part) : tabulate_degree_table(free_part);
    std::string path = o.out;
    if (path.empty()) {
      std::filesystem::create_directories(o.tables_dir);
      path = o.tables_dir + "/" + bundled_file_name(t.field, t.generators);
    }
    save_degree_table(t, path);
    if (!(load_degree_table(path) == t)) throw std::logic_error("round trip failed for " + path);
    rep.add({t.field, t.generators, std::to_string(t.z), std::to_string(t.entries.size()), path});
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Densities of primes whose reduction order satisfies divisibility conditions"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "csv", "json"}));
    sub->add_option("--tables-dir", o.tables_dir, "Directory of bundled degree tables");
    sub->add_option("--config", o.config, "Config file with `key value` lines");
    sub->add_option("--field", o.field, "Built-in field label (Q, Qzeta3, Qzeta4, Qzeta12, Qsqrtm5) or a label for --field-poly");
    sub->add_option("--field-poly", o.field_poly, "Monic defining polynomial in x, e.g. x^2+5");
    sub->add_option("--group", o.group, "Comma-separated generators; polynomials in a for non-rational elements");
    sub->add_option("--torsion", o.torsion, "Order of the torsion part");
    sub->add_option("--table", o.table_file, "Degree-table file to use");
    sub->add_flag("--tabulate", o.tabulate, "Compute the degree table from Frobenius data instead of loading it");
  };

  auto* density = app.add_subcommand("density", "Density of primes with m | ord");
  add_common(density);
  density->add_option("--m", o.m, "Modulus m");
  density->add_option("--series", o.series_bound, "Also report the truncated series interval with this bound");
  density->add_option("--verify", o.verify_x, "Also count primes up to this bound and compare");
  density->add_option("--tolerance", o.tolerance, "Allowed |empirical - exact| for --verify");
  density->add_option("--threads", o.threads, "Worker threads for --verify (0: all cores)");

  auto* kfree = app.add_subcommand("kfree", "Density of primes with k-free ord, as a multiple of A(k,r)");
  add_common(kfree);
  kfree->add_option("--k", o.k, "k >= 2");

  auto* val = app.add_subcommand("valuation", "Density of primes with v_l(ord) = v_l(m) for every l | k");
  add_common(val);
  val->add_option("--k", o.k, "Squarefree k");
  val->add_option("--m", o.m, "m with rad(m) | k");

  auto* cop = app.add_subcommand("coprime", "Density of primes with (ord, k) = 1");
  add_common(cop);
  cop->add_option("--k", o.k, "Squarefree k");

  auto* tables = app.add_subcommand("tables", "Regenerate the reference density tables and compare cell by cell");
  add_common(tables);
  tables->add_option("which", o.which, "Table number 1..8, a comma list, or all");

  auto* verify = app.add_subcommand("verify", "Compare an empirical event frequency with the exact density");
  add_common(verify);
  verify->add_option("--event", o.event, "div:m, kfree:k, val:k,m, coprime:k or kummer:m,n");
  verify->add_option("--x", o.x, "Prime bound X (accepts 1e7)");
  verify->add_option("--tolerance", o.tolerance, "Allowed |empirical - exact|");
  verify->add_option("--threads", o.threads, "Worker threads (0: all cores)");

  auto* tab = app.add_subcommand("tabulate", "Compute degree tables from Frobenius data and write them");
  add_common(tab);
  tab->add_option("--out", o.out, "Output file (default: tables dir)");

  CLI11_PARSE(app, argc, argv);
  CLI::App* sub = app.get_subcommands().front();

  try {
    if (!o.config.empty()) {
      std::map<std::string, bool> given;
      for (const char* key : {"field", "field-poly", "torsion", "table", "m", "n", "k", "event", "x", "tolerance", "threads"}) {
        std::string name = std::string("--") + key;
        try {
          given[key] = sub->get_option(name)->count() > 0;
        } catch (const CLI::OptionNotFound&) {
          given[key] = false;
        }
      }
      given["group"] = given["generators"] = sub->get_option("--group")->count() > 0;
      apply_config(o.config, o, given);
    }
    Report rep;
    int status = 0;
    const std::string name = sub->get_name();
    if (name == "density") status = cmd_density(o, rep);
    else if (name == "kfree") status = cmd_kfree(o, rep);
    else if (name == "valuation") status = cmd_valuation(o, rep);
    else if (name == "coprime") status = cmd_coprime(o, rep);
    else if (name == "tables") status = cmd_tables(o, rep);
    else if (name == "verify") status = cmd_verify(o, rep);
    else if (name == "tabulate") status = cmd_tabulate(o, rep);
    rep.print(o.format, std::cout);
    return status;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << sub->get_name() << ": " << ex.what() << "\n";
    return 2;
  }
}
