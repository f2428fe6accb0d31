#include <gtest/gtest.h>

#include <filesystem>

#include "divord/tables.hpp"
#include "divord/tabulate.hpp"

using namespace divord;

namespace {

void expect_all_match(int id, std::size_t cells) {
  auto got = regenerate_table(id);
  EXPECT_EQ(got.size(), cells) << "table " << id;
  for (const auto& c : got)
    EXPECT_TRUE(c.match) << "table " << id << " <" << c.group << "> " << c.column << ": computed " << c.computed
                         << " expected " << c.expected << " decimal " << c.decimal_computed << " vs " << c.decimal_expected;
}

}  // namespace

TEST(ReferenceTables, RhoOverQ) { expect_all_match(1, 56); }
TEST(ReferenceTables, RhoOverZeta3) { expect_all_match(2, 56); }
TEST(ReferenceTables, RhoOverZeta12) { expect_all_match(3, 56); }
TEST(ReferenceTables, RhoOverZeta4) { expect_all_match(4, 56); }
TEST(ReferenceTables, EulerConstants) { expect_all_match(5, 35); }
TEST(ReferenceTables, BetaOverZeta3) { expect_all_match(6, 28); }
TEST(ReferenceTables, BetaOverZeta4) { expect_all_match(7, 28); }
TEST(ReferenceTables, GammaOverSqrtMinus5) { expect_all_match(8, 49); }

TEST(ReferenceTables, UnknownIdRejected) {
  EXPECT_THROW(regenerate_table(0), std::invalid_argument);
  EXPECT_THROW(regenerate_table(9), std::invalid_argument);
}

TEST(ReferenceTables, MismatchIsReported) {
  const std::string dir = (std::filesystem::temp_directory_path() / "divord_tampered").string();
  std::filesystem::create_directories(dir);
  for (const auto& entry : std::filesystem::directory_iterator(kDefaultTablesDir))
    std::filesystem::copy_file(entry.path(), dir + "/" + entry.path().filename().string(),
                               std::filesystem::copy_options::overwrite_existing);
  // replace the bundled <2> table over Q(zeta_3) by the one for <16>, relabelled
  DegreeTable t = load_degree_table(dir + "/Qzeta3_16.deg");
  t.generators = "2";
  save_degree_table(t, dir + "/Qzeta3_2.deg");
  auto cells = regenerate_table(2, dir);
  std::filesystem::remove_all(dir);
  std::size_t bad = 0;
  for (const auto& c : cells) bad += !c.match;
  EXPECT_GT(bad, 0u);
}

TEST(DecimalFormatting, RoundAndTruncate) {
  EXPECT_EQ(detail::round_like(0.9535114L, "0.953"), "0.954");
  EXPECT_EQ(detail::truncate_like(0.9535114L, "0.953"), "0.953");
  EXPECT_EQ(detail::round_like(0.0222L, "0.0222"), "0.0222");
  EXPECT_EQ(detail::round_like(0.5307119L, "0.530712"), "0.530712");
}

TEST(BundledTables, FileNamesAndCoverage) {
  EXPECT_EQ(bundled_file_name("Qzeta4", "2a,27,25"), "Qzeta4_2a_27_25.deg");
  auto groups = reference_groups();
  EXPECT_EQ(groups.size(), 35u);
  for (const auto& [field, gens] : groups)
    EXPECT_TRUE(std::filesystem::exists(kDefaultTablesDir + "/" + bundled_file_name(field, gens))) << field << " " << gens;
}

TEST(BundledTables, TorsionComesFromTheGroup) {
  DegreeTable t = resolve_degree_table(GroupSpec(FieldSpec::builtin("Qzeta4"), {"3", "a"}));
  EXPECT_EQ(t.torsion, 4u);
  EXPECT_EQ(t.generators, "3");
}

TEST(BundledTables, FreshTabulationMatchesForEveryZeta3Group) {
  for (const auto& [field, gens] : reference_groups()) {
    if (field != "Qzeta3") continue;
    GroupSpec g(FieldSpec::builtin(field), GroupSpec::split_generators(gens));
    DegreeTable fresh = tabulate_degree_table(g);
    EXPECT_EQ(fresh, resolve_degree_table(g)) << gens;
  }
}
