#include <filesystem>
#include <fstream>
#include <random>

#include "dwimpute/errors.hpp"
#include "dwimpute/matcher.hpp"
#include "gtest/gtest.h"
#include "test_util.hpp"

namespace dwimpute {
namespace {

TEST(MatcherTest, Normalize) {
  const MatchConfig cfg;
  EXPECT_EQ(normalize("c_nationkey", cfg, "Customer"), "nationkey");
  EXPECT_EQ(normalize("SupplierCity", cfg, "Supplier"), "city");
  EXPECT_EQ(normalize("city", cfg, "Store"), "city");
  EXPECT_EQ(normalize("Customer_City", cfg, "Customer"), "city");
  EXPECT_EQ(normalize("CityCustomer", cfg, "Customer"), "city");
  EXPECT_EQ(normalize("Customer", cfg, "Customer"), "");
}

TEST(MatcherTest, NormalizeExtraTokensAndCase) {
  MatchConfig cfg;
  cfg.strip_tokens = {"dim", "_code"};
  EXPECT_EQ(normalize("dim_State_code", cfg, "Geo"), "state");
  cfg.case_fold = false;
  EXPECT_EQ(normalize("GeoCity", cfg, "Geo"), "City");
  EXPECT_EQ(normalize("geoCity", cfg, "Geo"), "geoCity");
}

TEST(MatcherTest, NormalizeIsIdempotent) {
  const MatchConfig cfg;
  for (const char* name : {"c_c_key", "SupplierSupplierCity", "__x__", "s_nation_Supplier", "a_b_c", "Geo-Geo"}) {
    const auto once = normalize(name, cfg, "Supplier");
    EXPECT_EQ(normalize(once, cfg, "Supplier"), once) << name;
  }
}

TEST(MatcherTest, Similarity) {
  EXPECT_DOUBLE_EQ(similarity("nation", "nation"), 1.0);
  // One insertion over seven characters.
  EXPECT_EQ(testing::oracle::edit_distance("nation", "nations"), 1u);
  EXPECT_DOUBLE_EQ(similarity("nation", "nations"), 1.0 - 1.0 / 7.0);
  // city -> code: substitute i, t, y; c matches.
  EXPECT_EQ(testing::oracle::edit_distance("city", "code"), 3u);
  EXPECT_DOUBLE_EQ(similarity("city", "code"), 0.25);
  EXPECT_DOUBLE_EQ(similarity("", ""), 1.0);
  EXPECT_DOUBLE_EQ(similarity("abc", ""), 0.0);
}

TEST(MatcherTest, AttributesMatch) {
  const MatchConfig cfg;
  auto d = attributes_match("c_nationkey", "Customer", "s_nationkey", "Supplier", cfg);
  EXPECT_TRUE(d.matched);
  EXPECT_DOUBLE_EQ(d.score, 1.0);

  // city vs quantity: 5 edits over 8 characters.
  EXPECT_EQ(testing::oracle::edit_distance("city", "quantity"), 5u);
  d = attributes_match("City", "Customer", "Quantity", "Order", cfg);
  EXPECT_FALSE(d.matched);
  EXPECT_DOUBLE_EQ(d.score, 0.375);

  d = attributes_match("City", "A", "City", "B", cfg);
  EXPECT_TRUE(d.matched);
  EXPECT_DOUBLE_EQ(d.score, 1.0);
}

TEST(MatcherTest, EmptyNormalizedNameMatchesNothing) {
  const MatchConfig cfg;
  EXPECT_FALSE(attributes_match("Customer", "Customer", "Customer", "Customer2", cfg).matched);
}

TEST(MatcherTest, AliasOverridesSimilarityBothWays) {
  const MatchConfig cfg;
  AliasMap aliases;
  aliases.add("Customer", "Town", "Supplier", "Locality");
  EXPECT_FALSE(attributes_match("Town", "Customer", "Locality", "Supplier", cfg).matched);
  EXPECT_TRUE(attributes_match("Town", "Customer", "Locality", "Supplier", cfg, &aliases).matched);
  EXPECT_TRUE(attributes_match("Locality", "Supplier", "Town", "Customer", cfg, &aliases).matched);
}

TEST(MatcherTest, ThresholdCheck) {
  MatchConfig cfg;
  cfg.threshold = 1.5;
  EXPECT_THROW(cfg.check(), UsageError);
  cfg.threshold = 0.0;
  EXPECT_NO_THROW(cfg.check());
}

TEST(MatcherTest, BestMatchPrefersHighestThenEarliest) {
  const MatchConfig cfg;
  const std::vector<std::string> candidates{"x_cities", "x_city", "y_city"};
  const auto best = best_match("c_city", "Customer", candidates, "Other", cfg);
  ASSERT_TRUE(best);
  EXPECT_EQ(best->attribute, "x_city");
  EXPECT_FALSE(best_match("c_zzz", "Customer", candidates, "Other", cfg));
}

TEST(MatcherTest, SymmetryAndIdentityProperties) {
  std::mt19937_64 rng(7);
  const std::string alphabet = "abcAB_-";
  auto random_name = [&] {
    std::string s;
    for (std::size_t k = 0, n = rng() % 10; k < n; ++k) s.push_back(alphabet[rng() % alphabet.size()]);
    return s;
  };
  const MatchConfig cfg;
  for (int i = 0; i < 500; ++i) {
    const auto a = random_name();
    const auto b = random_name();
    EXPECT_DOUBLE_EQ(similarity(a, b), similarity(b, a));
    EXPECT_EQ(similarity(a, b) == 1.0, a == b);
    const auto ab = attributes_match(a, "Left", b, "Right", cfg);
    const auto ba = attributes_match(b, "Right", a, "Left", cfg);
    EXPECT_EQ(ab.score, ba.score);
    EXPECT_EQ(ab.matched, ba.matched);
    EXPECT_EQ(ab.matched, ab.score >= cfg.threshold);
  }
}

TEST(MatcherTest, AliasMapFile) {
  const auto dir = std::filesystem::temp_directory_path() / "dwimpute_alias_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "ok.json")
      << R"([{"dimension_a": "C", "attribute_a": "Town", "dimension_b": "S", "attribute_b": "Locality"}])";
  std::ofstream(dir / "bad.json") << R"([{"dimension_a": "C", "attribute": "Town"}])";
  const auto aliases = load_alias_map(dir / "ok.json");
  EXPECT_TRUE(aliases.contains("S", "Locality", "C", "Town"));
  EXPECT_THROW(load_alias_map(dir / "bad.json"), FormatError);
  EXPECT_THROW(load_alias_map(dir / "none.json"), IoError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace dwimpute
