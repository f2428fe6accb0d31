#pragma once

// Published reference values for the eight density tables, keyed by field
// label and generator list. Generators of the fourth table are elements of
// Q(zeta_4) written in the field generator a = zeta_4.

#include <string>
#include <vector>

namespace divord::reference {

struct RhoRow {
  std::string generators;
  std::vector<std::string> values;  // one per modulus
};

struct RhoTable {
  int id;
  std::string caption;
  std::string field;
  std::vector<unsigned> moduli;
  std::vector<RhoRow> rows;
};

struct BetaRow {
  std::string generators;
  int rank;
  std::vector<std::string> multipliers;  // q with beta_k = q * A(k, rank)
  std::vector<std::string> decimals;     // printed to 3 significant places
};

struct BetaTable {
  int id;
  std::string caption;
  std::string field;
  std::vector<int> ks;
  std::vector<BetaRow> rows;
};

struct ConstantRow {
  int r;
  std::vector<std::string> values;  // k = 2..8
};

struct GammaRow {
  std::string generators;
  std::vector<std::string> values;
};

struct GammaTable {
  int id;
  std::string caption;
  std::string field;
  unsigned k;
  std::vector<unsigned> ms;
  std::vector<GammaRow> rows;
};

inline const std::vector<unsigned>& rho_moduli() {
  static const std::vector<unsigned> m{2, 3, 4, 6, 9, 12, 16, 27};
  return m;
}

inline const std::vector<RhoTable>& rho_tables() {
  static const std::vector<RhoTable> t{
      {1, "rho_m over Q", "Q", rho_moduli(),
       {{"2", {"17/24", "3/8", "5/12", "17/64", "1/8", "5/32", "1/24", "1/24"}},
        {"16", {"1/12", "3/8", "1/24", "1/32", "1/8", "1/64", "1/96", "1/24"}},
        {"3", {"2/3", "3/8", "1/3", "5/16", "1/8", "1/16", "1/12", "1/24"}},
        {"27", {"2/3", "1/8", "1/3", "5/48", "1/24", "1/48", "1/12", "1/72"}},
        {"2,3", {"195/224", "6/13", "27/56", "333/728", "2/13", "3/14", "5/56", "2/39"}},
        {"16,27", {"75/112", "5/13", "75/224", "235/728", "5/39", "95/1456", "75/896", "5/117"}},
        {"2,27,25", {"839/960", "37/80", "59/120", "17723/38400", "37/240", "1073/4800", "11/120", "37/720"}}}},
      {2, "rho_m over Q(zeta_3)", "Qzeta3", rho_moduli(),
       {{"2", {"17/24", "3/4", "5/12", "17/32", "1/4", "5/16", "1/24", "1/12"}},
        {"16", {"1/12", "3/4", "1/24", "1/16", "1/4", "1/32", "1/96", "1/12"}},
        {"3", {"5/6", "3/4", "1/6", "5/8", "1/4", "1/8", "1/24", "1/12"}},
        {"27", {"5/6", "1/4", "1/6", "5/24", "1/12", "1/24", "1/24", "1/36"}},
        {"2,3", {"111/112", "12/13", "13/28", "333/364", "4/13", "3/7", "3/56", "4/39"}},
        {"16,27", {"47/56", "10/13", "19/112", "235/364", "10/39", "95/728", "19/448", "10/117"}},
        {"2,27,25", {"479/480", "37/40", "29/60", "17723/19200", "37/120", "1073/2400", "7/120", "37/360"}}}},
      {3, "rho_m over Q(zeta_4, sqrt 3) = Q(zeta_12)", "Qzeta12", rho_moduli(),
       {{"2", {"11/12", "3/4", "5/6", "11/16", "1/4", "5/8", "1/12", "1/12"}},
        {"16", {"1/6", "3/4", "1/12", "1/8", "1/4", "1/16", "1/48", "1/12"}},
        {"3", {"2/3", "3/4", "1/3", "1/2", "1/4", "1/4", "1/12", "1/12"}},
        {"27", {"2/3", "1/4", "1/3", "1/6", "1/12", "1/12", "1/12", "1/36"}},
        {"2,3", {"55/56", "12/13", "13/14", "165/182", "4/13", "6/7", "3/28", "4/39"}},
        {"16,27", {"19/28", "10/13", "19/56", "95/182", "10/39", "95/364", "19/224", "10/117"}},
        {"2,27,25", {"239/240", "37/40", "29/30", "8843/9600", "37/120", "1073/1200", "7/60", "37/360"}}}},
      {4, "rho_m over Q(zeta_4)", "Qzeta4", rho_moduli(),
       {{"2a", {"2/3", "3/8", "1/3", "1/4", "1/8", "1/8", "1/12", "1/24"}},
        {"16a", {"47/48", "3/8", "23/24", "47/128", "1/8", "23/64", "1/48", "1/24"}},
        {"3a", {"5/6", "3/8", "2/3", "11/32", "1/8", "5/16", "1/6", "1/24"}},
        {"27a", {"5/6", "1/8", "2/3", "11/96", "1/24", "5/48", "1/6", "1/72"}},
        {"2a,3a", {"13/14", "6/13", "5/7", "165/364", "2/13", "3/7", "5/28", "2/39"}},
        {"16a,27", {"1791/1792", "5/13", "447/448", "4475/11648", "5/39", "1115/2912", "75/448", "5/117"}},
        {"2a,27,25", {"29/30", "37/80", "11/15", "259/600", "37/240", "259/1200", "11/60", "37/720"}}}},
  };
  return t;
}

/// A(k, r) for primes below 10^5, k = 2..8.
inline const std::vector<ConstantRow>& constant_table() {
  static const std::vector<ConstantRow> t{
      {1, {"0.530712", "0.788163", "0.901926", "0.953511", "0.977581", "0.989060", "0.994618"}},
      {2, {"0.434934", "0.734313", "0.875354", "0.940597", "0.971280", "0.985966", "0.993091"}},
      {3, {"0.401045", "0.714103", "0.865118", "0.935552", "0.968798", "0.984741", "0.992484"}},
      {4, {"0.386687", "0.705354", "0.860624", "0.933316", "0.967691", "0.984192", "0.992211"}},
      {5, {"0.380106", "0.701307", "0.858528", "0.932267", "0.967169", "0.983932", "0.992082"}},
  };
  return t;
}

inline const std::vector<BetaTable>& beta_tables() {
  static const std::vector<BetaTable> t{
      {6, "beta_k over Q(zeta_3)", "Qzeta3", {2, 3, 4, 5},
       {{"2", 1, {"3/4", "121/115", "805/781", "5029/4945"}, {"0.398", "0.829", "0.930", "0.970"}},
        {"16", 1, {"69/56", "517/460", "3325/3124", "20437/19780"}, {"0.654", "0.886", "0.960", "0.985"}},
        {"3", 1, {"15/14", "121/115", "805/781", "5029/4945"}, {"0.569", "0.829", "0.930", "0.970"}},
        {"27", 1, {"55/42", "77/69", "2461/2343", "15181/14835"}, {"0.695", "0.880", "0.947", "0.976"}},
        {"2,3", 2, {"135/176", "875/814", "5989/5750", "37823/36994"}, {"0.334", "0.789", "0.912", "0.962"}},
        {"16,27", 2, {"899/704", "21935/19536", "48763/46000", "914711/887856"}, {"0.555", "0.824", "0.928", "0.969"}},
        {"2,27,25",
         3,
         {"95201/119193", "105751169/96766014", "524265887/500045142", "116376274169/113496822354"},
         {"0.320", "0.780", "0.907", "0.959"}}}},
      {7, "beta_k over Q(zeta_4)", "Qzeta4", {2, 3, 4, 5},
       {{"2", 1, {"1/4", "1", "1", "1"}, {"0.133", "0.788", "0.902", "0.953"}},
        {"16", 1, {"11/8", "23/20", "47/44", "95/92"}, {"0.730", "0.906", "0.963", "0.985"}},
        {"3", 1, {"3/7", "91/115", "709/781", "4729/4945"}, {"0.227", "0.624", "0.819", "0.912"}},
        {"27", 1, {"11/21", "283/345", "2149/2343", "331/345"}, {"0.278", "0.647", "0.827", "0.915"}},
        {"2,3", 2, {"9/176", "329/407", "2641/2875", "17795/18497"}, {"0.0222", "0.594", "0.804", "0.905"}},
        {"16,27", 2, {"1073/2112", "5501/6512", "128873/138000", "286741/295952"}, {"0.221", "0.620", "0.817", "0.911"}},
        {"2,27,25",
         3,
         {"23323/953544", "79247549/96766014", "3234551969/3500315994", "109490052089/113496822354"},
         {"0.00981", "0.585", "0.799", "0.903"}}}},
  };
  return t;
}

inline const GammaTable& gamma_table() {
  static const GammaTable t{
      8, "gamma_{6,m} over Q(sqrt -5)", "Qsqrtm5", 6, {1, 2, 3, 4, 6, 9, 12},
      {{"2", {"35/192", "35/192", "7/96", "5/24", "7/96", "7/288", "1/12"}},
       {"16", {"55/96", "5/192", "11/48", "5/384", "1/96", "11/144", "1/192"}},
       {"3", {"13/48", "1/12", "1/24", "13/96", "1/6", "1/72", "1/48"}},
       {"27", {"5/16", "1/4", "1/72", "5/32", "1/18", "1/216", "1/144"}},
       {"2,3", {"365/2912", "423/2912", "1/364", "101/728", "59/364", "1/1092", "10/91"}},
       {"16,27", {"391/1456", "225/2912", "15/364", "785/5824", "125/728", "5/364", "95/4368"}},
       {"2,27,25", {"801/6400", "927/6400", "37/28800", "443/3200", "4699/28800", "37/86400", "1591/14400"}}}};
  return t;
}

}  // namespace divord::reference
