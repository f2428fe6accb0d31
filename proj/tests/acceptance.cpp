// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failing criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "divord/density.hpp"
#include "divord/empirical.hpp"
#include "divord/kummer.hpp"
#include "divord/tables.hpp"

using namespace divord;

namespace {

constexpr double kTable1Seconds = 10;
constexpr double kBundledSeconds = 30;
constexpr double kConstantSeconds = 5;
constexpr double kEmpiricalSeconds = 300;
constexpr double kEmpiricalTolerance = 0.01;
constexpr double kKummerTolerance = 0.01;
const Rat kSeriesWidth(1, 1000000);

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v, int places = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", places, v);
  return buf;
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& ex) {
    o = {false, std::string("exception: ") + ex.what()};
  }
  if (!o.pass) ++failures;
  std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << " | " << title << " | " << o.detail << std::endl;
}

Outcome tables_outcome(const std::vector<int>& ids, double limit) {
  auto t0 = Clock::now();
  std::size_t total = 0, bad = 0;
  std::string first_bad;
  for (int id : ids) {
    for (const auto& c : regenerate_table(id)) {
      ++total;
      if (!c.match) {
        ++bad;
        if (first_bad.empty())
          first_bad = "; first mismatch table " + std::to_string(id) + " <" + c.group + "> " + c.column + " computed " +
                      c.computed + " expected " + c.expected;
      }
    }
  }
  const double s = seconds_since(t0);
  return {bad == 0 && s < limit, std::to_string(total - bad) + "/" + std::to_string(total) + " cells in " + fmt(s, 3) +
                                     " s (limit " + fmt(limit, 0) + " s)" + first_bad};
}

// Random groups over Q of rank <= 3 with generators in [2, 60]; about one in
// four also carries the torsion element -1.
std::vector<GroupSpec> random_groups(std::size_t count, std::mt19937_64& rng) {
  std::vector<GroupSpec> out;
  std::uniform_int_distribution<int> rank(1, 3), gen(2, 60), coin(0, 3);
  while (out.size() < count) {
    std::vector<std::string> gens;
    int r = rank(rng);
    for (int i = 0; i < r; ++i) gens.push_back(std::to_string(gen(rng)));
    try {
      out.emplace_back(FieldSpec::builtin("Q"), gens, coin(rng) == 0 ? 2 : 1);
    } catch (const std::domain_error&) {
      // dependent generators: draw again
    }
  }
  return out;
}

}  // namespace

int main() {
  report(1, "rho_m over Q, 7 groups x 8 moduli, native degree tables", [] { return tables_outcome({1}, kTable1Seconds); });

  report(2, "rho_m over Q(zeta_3), Q(zeta_12), Q(zeta_4) and gamma over Q(sqrt -5) from bundled tables",
         [] { return tables_outcome({2, 3, 4, 8}, kBundledSeconds); });

  report(3, "A(k,r) for primes below 10^5 to 6 decimals", [] { return tables_outcome({5}, kConstantSeconds); });

  report(4, "beta_k multipliers exact and decimals to 3 places over Q(zeta_3) and Q(zeta_4)",
         [] { return tables_outcome({6, 7}, 1e9); });

  report(5, "200 random cases over Q: closed form inside series interval, gamma identities", [] {
    std::mt19937_64 rng(20240611);
    auto groups = random_groups(200, rng);
    std::uniform_int_distribution<u64> mdist(1, 60);
    const std::vector<u64> ks{2, 3, 5, 6, 10, 15, 30};
    std::size_t inside = 0, gamma_equal = 0, partitions = 0, partition_checks = 0;
    Rat widest = 0;
    std::string first_bad;
    for (const auto& g : groups) {
      DegreeTable t = compute_degree_table_Q(g);
      const u64 m = mdist(rng);
      const Rat closed = *rho_closed(m, t).exact;
      DensityValue s = rho_series_to_width(m, t, kSeriesWidth);
      if (s.width() > widest) widest = s.width();
      if (s.contains(closed) && s.width() < kSeriesWidth)
        ++inside;
      else if (first_bad.empty())
        first_bad = "; series miss <" + g.generators_joined() + "> m=" + std::to_string(m);
      const u64 k = ks[rng() % ks.size()];
      std::vector<u64> ms;
      for (u64 mm = 1; mm <= 60; ++mm)
        if (k % radical(mm) == 0) ms.push_back(mm);
      const u64 gm = ms[rng() % ms.size()];
      if (*gamma_closed(k, gm, t).exact == *gamma_via_rho(k, gm, t).exact)
        ++gamma_equal;
      else if (first_bad.empty())
        first_bad = "; gamma mismatch <" + g.generators_joined() + "> k=" + std::to_string(k) + " m=" + std::to_string(gm);
      for (u64 ell : {2, 3, 5}) {
        Rat sum = *rho_closed(ipow(ell, 5), t).exact;
        for (unsigned a = 0; a <= 4; ++a) sum += *gamma_closed(ell, ipow(ell, a), t).exact;
        ++partition_checks;
        if (sum == 1) ++partitions;
      }
    }
    const bool ok = inside == groups.size() && gamma_equal == groups.size() && partitions == partition_checks;
    return Outcome{ok, "series " + std::to_string(inside) + "/200 (widest " + fmt(static_cast<double>(to_long_double(widest)), 10) +
                           "), gamma " + std::to_string(gamma_equal) + "/200, partition " + std::to_string(partitions) + "/" +
                           std::to_string(partition_checks) + first_bad};
  });

  report(6, "degree-table invariants for every native and bundled table", [] {
    std::vector<DegreeTable> tables;
    for (const auto& row : reference::rho_tables()[0].rows)
      tables.push_back(compute_degree_table_Q(GroupSpec(FieldSpec::builtin("Q"), GroupSpec::split_generators(row.generators))));
    std::mt19937_64 rng(7);
    for (const auto& g : random_groups(40, rng)) tables.push_back(compute_degree_table_Q(g));
    const std::size_t native = tables.size();
    for (auto& [key, t] : load_table_directory(kDefaultTablesDir)) tables.push_back(t);
    const std::size_t bundled = tables.size() - native;
    std::size_t ok = 0;
    std::string first_bad;
    for (const auto& t : tables) {
      std::string err;
      try {
        validate(t);
        err = check_lift_properties(t);
      } catch (const std::exception& ex) {
        err = ex.what();
      }
      if (err.empty())
        ++ok;
      else if (first_bad.empty())
        first_bad = "; " + t.field + " <" + t.generators + ">: " + err;
    }
    return Outcome{ok == tables.size() && bundled >= reference_groups().size(),
                   std::to_string(ok) + "/" + std::to_string(tables.size()) + " tables (" + std::to_string(native) + " native, " +
                       std::to_string(bundled) + " bundled)" + first_bad};
  });

  report(7, "empirical frequencies at X = 10^7 within 0.01 of the exact densities, single worker", [] {
    const u64 X = 10000000;
    EmpiricalOptions one;
    one.threads = 1;
    auto t0 = Clock::now();
    std::string detail;
    bool ok = true;
    auto check = [&](const GroupSpec& g, const std::vector<u64>& moduli) {
      DegreeTable t = resolve_degree_table(g);
      std::vector<Event> events;
      for (u64 m : moduli) events.push_back(Event::divisible(m));
      auto counts = count_events(g, events, X, one);
      for (std::size_t i = 0; i < moduli.size(); ++i) {
        const Rat exact = *rho_closed(moduli[i], t).exact;
        const double dev = std::fabs(counts[i].ratio() - static_cast<double>(to_long_double(exact)));
        ok = ok && counts[i].defined() && dev < kEmpiricalTolerance;
        detail += g.field().label() + " <" + g.generators_joined() + "> rho_" + std::to_string(moduli[i]) + " " +
                  fmt(counts[i].ratio()) + " vs " + to_string(exact) + " (dev " + fmt(dev, 4) + "); ";
      }
    };
    check(GroupSpec(FieldSpec::builtin("Q"), {"2"}), {2, 3, 12});
    check(GroupSpec(FieldSpec::builtin("Qzeta4"), {"2a"}), {2});
    check(GroupSpec(FieldSpec::builtin("Qzeta4"), {"2"}), {2});
    const double s = seconds_since(t0);
    ok = ok && s < kEmpiricalSeconds;
    detail += "ord*ind = p-1 asserted on every prime; " + fmt(s, 1) + " s (limit " + fmt(kEmpiricalSeconds, 0) + " s)";
    return Outcome{ok, detail};
  });

  report(8, "KummerSplit(8,2) for <2> and KummerSplit(5,1) for <5> within 0.01 of 1/4 at X = 10^6", [] {
    const u64 X = 1000000;
    auto c1 = count_event(GroupSpec(FieldSpec::builtin("Q"), {"2"}), Event::kummer_split(8, 2), X);
    auto c2 = count_event(GroupSpec(FieldSpec::builtin("Q"), {"5"}), Event::kummer_split(5, 1), X);
    const double d1 = std::fabs(c1.ratio() - 0.25), d2 = std::fabs(c2.ratio() - 0.25);
    return Outcome{d1 < kKummerTolerance && d2 < kKummerTolerance,
                   c1.record() + " (dev " + fmt(d1, 4) + "); " + c2.record() + " (dev " + fmt(d2, 4) + ")"};
  });

  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << std::endl;
  return failures;
}
