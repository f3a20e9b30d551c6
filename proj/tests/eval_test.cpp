#include <sstream>

#include "dwimpute/errors.hpp"
#include "dwimpute/eval.hpp"
#include "gtest/gtest.h"
#include "test_util.hpp"

namespace dwimpute {
namespace {

using testing::make_dimension;
using testing::make_model;

// 100 rows; City repeats every 10 rows, State is City / 5.
WarehouseModel hundred_rows() {
  const Hierarchy h{"Geo", {"id", "City", "State"}, {{"City", {"CityName"}}}};
  std::vector<Row> rows;
  for (int r = 0; r < 100; ++r) {
    const int city = r % 10;
    rows.push_back({std::to_string(r), "c" + std::to_string(city), "s" + std::to_string(city / 5),
                    "name" + std::to_string(city)});
  }
  return make_model({make_dimension("Customer", {"id", "City", "State", "CityName"}, {h}, rows)});
}

std::size_t nulls(const WarehouseModel& m, const std::string& attribute) {
  const auto& t = m.dimensions[0].table;
  return missing_cells(t, "Customer", attribute).size();
}

TEST(EvalTest, RngIsDeterministicAndBounded) {
  Rng a(5), b(5);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.below(7);
    EXPECT_EQ(x, b.below(7));
    EXPECT_LT(x, 7u);
  }
  auto p = Rng(3).permutation(50);
  EXPECT_EQ(p, Rng(3).permutation(50));
  std::sort(p.begin(), p.end());
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(p[i], i);
}

TEST(EvalTest, InjectCountsAndRecordsTruth) {
  auto m = hundred_rows();
  const auto original = m;
  const auto truth = inject(m, {"Customer", "State"}, 0.10, 7);
  EXPECT_EQ(truth.entries.size(), 10u);
  EXPECT_EQ(truth.requested, 10u);
  EXPECT_EQ(nulls(m, "State"), 10u);
  for (const auto& [address, value] : truth.entries) {
    EXPECT_EQ(testing::cell(original.dimensions[0], address.row, "State"), value);
    EXPECT_FALSE(testing::cell(m.dimensions[0], address.row, "State").has_value());
  }
  // Other columns untouched.
  EXPECT_EQ(nulls(m, "City"), 0u);
}

TEST(EvalTest, InjectIsDeterministicPerSeed) {
  auto a = hundred_rows();
  auto b = hundred_rows();
  auto c = hundred_rows();
  const auto ta = inject(a, {"Customer", "State"}, 0.2, 11);
  const auto tb = inject(b, {"Customer", "State"}, 0.2, 11);
  const auto tc = inject(c, {"Customer", "State"}, 0.2, 12);
  EXPECT_EQ(ta.entries, tb.entries);
  EXPECT_EQ(a.dimensions[0].table, b.dimensions[0].table);
  EXPECT_NE(ta.entries, tc.entries);
}

TEST(EvalTest, InjectSaturatesAndSkipsExistingNulls) {
  auto m = hundred_rows();
  auto& t = m.dimensions[0].table;
  const auto col = t.column_index("State");
  for (std::size_t r = 0; r < 95; ++r) t.at(r, col).reset();
  const auto truth = inject(m, {"Customer", "State"}, 0.10, 1);
  EXPECT_EQ(truth.requested, 10u);
  EXPECT_EQ(truth.entries.size(), 5u);
  for (const auto& [address, value] : truth.entries) EXPECT_GE(address.row, 95u);
}

TEST(EvalTest, IneligibleAndBadRates) {
  auto m = hundred_rows();
  EXPECT_THROW(inject(m, {"Customer", "City"}, 0.1, 1), IneligibleTargetError);
  EXPECT_THROW(inject(m, {"Customer", "id"}, 0.1, 1), IneligibleTargetError);
  EXPECT_THROW(inject(m, {"Customer", "State"}, 0.0, 1), UsageError);
  EXPECT_THROW(inject(m, {"Customer", "State"}, 1.0, 1), UsageError);
  EXPECT_TRUE(is_eligible(m.dimensions[0], "CityName"));
  EXPECT_EQ(eligible_targets(m), (std::vector<Target>{{"Customer", "State"}, {"Customer", "CityName"}}));
  try {
    require_eligible(m, {{"Customer", "City"}});
    FAIL();
  } catch (const IneligibleTargetError& e) {
    EXPECT_NE(std::string(e.what()).find("Customer.City"), std::string::npos) << e.what();
  }
}

TEST(EvalTest, ParseTarget) {
  EXPECT_EQ(parse_target("Customer.State"), (Target{"Customer", "State"}));
  EXPECT_THROW(parse_target("Customer"), UsageError);
  EXPECT_THROW(parse_target(".State"), UsageError);
}

GroundTruth truth_of(std::size_t n) {
  GroundTruth t;
  for (std::size_t r = 0; r < n; ++r) t.entries[{"D", r, "A"}] = "v" + std::to_string(r);
  t.requested = n;
  return t;
}

FillRecord fill(std::size_t row, std::string value) {
  FillRecord f;
  f.target = {"D", row, "A"};
  f.value = std::move(value);
  return f;
}

TEST(EvalTest, ScoreExamples) {
  const auto truth = truth_of(10);
  FillLog fills;
  for (std::size_t r = 0; r < 8; ++r) fills.push_back(fill(r, "v" + std::to_string(r)));
  auto report = score(fills, truth);
  EXPECT_EQ(report.pooled, (AttributeScore{10, 8, 8}));
  EXPECT_DOUBLE_EQ(*report.pooled.imputation_rate(), 0.8);
  EXPECT_DOUBLE_EQ(*report.pooled.accuracy(), 1.0);

  report = score({}, truth);
  EXPECT_DOUBLE_EQ(*report.pooled.imputation_rate(), 0.0);
  EXPECT_FALSE(report.pooled.accuracy().has_value());
  EXPECT_EQ(format_metric(report.pooled.accuracy()), "n/a");

  report = score({fill(0, "V0")}, truth);
  EXPECT_EQ(report.pooled.correct, 0u);
  report = score({fill(0, "V0")}, truth, true);
  EXPECT_EQ(report.pooled.correct, 1u);
}

TEST(EvalTest, FillOutsideTruthIsProtocolError) {
  EXPECT_THROW(score({fill(42, "x")}, truth_of(3)), ProtocolError);
  EXPECT_THROW(score({fill(1, "v1"), fill(1, "v1")}, truth_of(3)), ProtocolError);
}

TEST(EvalTest, SingleTrialMatchesManualRun) {
  const auto m = hundred_rows();
  TrialPlan plan;
  plan.targets = {{"Customer", "State"}};
  plan.rates = {0.2};
  plan.trials = 1;
  plan.seed = 9;
  const auto results = run_trials(m, plan);
  ASSERT_EQ(results.size(), 1u);

  auto manual = m;
  Rng rng(9);
  const auto truth = inject(manual, {"Customer", "State"}, 0.2, rng);
  const auto fills = run_strategy(manual, plan.config);
  const auto expected = score(fills, truth);
  EXPECT_EQ(results[0].attributes.at("Customer.State"), expected.pooled);
  EXPECT_EQ(results[0].imputation_rate, expected.pooled.imputation_rate());
  EXPECT_EQ(results[0].accuracy, expected.pooled.accuracy());
  // Strict data with ten rows per city: everything comes back.
  EXPECT_EQ(expected.pooled, (AttributeScore{20, 20, 20}));
}

TEST(EvalTest, PooledIsCountWeightedCombination) {
  const auto m = hundred_rows();
  TrialPlan plan;
  plan.targets = {{"Customer", "State"}, {"Customer", "CityName"}};
  plan.rates = {0.3};
  plan.trials = 3;
  const auto results = run_trials(m, plan);
  for (const auto& report : results[0].reports) {
    AttributeScore sum;
    for (const auto& [name, s] : report.attributes) sum += s;
    EXPECT_EQ(report.pooled, sum);
    ASSERT_TRUE(report.pooled.imputation_rate());
    double weighted = 0.0;
    for (const auto& [name, s] : report.attributes) {
      weighted += *s.imputation_rate() * static_cast<double>(s.missing);
    }
    EXPECT_NEAR(*report.pooled.imputation_rate(), weighted / static_cast<double>(report.pooled.missing), 1e-12);
  }
}

TEST(EvalTest, RatesShareInjectionPrefix) {
  // The same seed walks the same permutation, so a lower rate's cells are a
  // subset of a higher rate's.
  auto low = hundred_rows();
  auto high = hundred_rows();
  const auto a = inject(low, {"Customer", "State"}, 0.05, 3);
  const auto b = inject(high, {"Customer", "State"}, 0.30, 3);
  for (const auto& [address, value] : a.entries) EXPECT_TRUE(b.entries.count(address));
}

TEST(EvalTest, ParallelJobsGiveSameResults) {
  const auto m = hundred_rows();
  TrialPlan plan;
  plan.targets = {{"Customer", "State"}};
  plan.rates = {0.1, 0.5};
  plan.trials = 4;
  auto serial = run_trials(m, plan);
  plan.jobs = 3;
  auto parallel = run_trials(m, plan);
  std::ostringstream a, b;
  write_results(serial, plan.config, a, false);
  write_results(parallel, plan.config, b, false);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_NE(a.str().find("rate,trials,imputation_rate,accuracy,runtime_s,strategy,policy"), std::string::npos);
}

}  // namespace
}  // namespace dwimpute
