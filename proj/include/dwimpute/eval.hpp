#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "dwimpute/errors.hpp"
#include "dwimpute/fill.hpp"
#include "dwimpute/pipeline.hpp"
#include "dwimpute/schema.hpp"

namespace dwimpute {

class IneligibleTargetError : public Error {
 public:
  using Error::Error;
};

// Deterministic 64-bit stream. std::mt19937_64 output is fixed by the
// standard; the bounded draw below is ours so shuffles do not depend on the
// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  // Seeded Fisher-Yates permutation of 0..n-1.
  std::vector<std::size_t> permutation(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

struct Target {
  std::string dimension;
  std::string attribute;

  auto operator<=>(const Target&) const = default;
};

std::string to_string(const Target& target);
// "Dimension.Attribute"; throws UsageError on malformed text.
Target parse_target(std::string_view text);

// Parameters at level >= 2 and weak attributes at level >= 1 (0-based, the
// identifier is level 0) in some hierarchy of the dimension. Values of the
// identifier never repeat, so lower targets could never be completed.
bool is_eligible(const Dimension& dimension, std::string_view attribute);

// Throws IneligibleTargetError with an explanation for each bad target.
void require_eligible(const WarehouseModel& model, const std::vector<Target>& targets);

// Every eligible attribute of every dimension, in schema order.
std::vector<Target> eligible_targets(const WarehouseModel& model);

struct GroundTruth {
  std::map<CellAddress, std::string> entries;
  // Cells the rate asked for, before saturation against available values.
  std::size_t requested = 0;

  void merge(const GroundTruth& other);
};

// Nulls floor(rate * rows) non-null cells of `attribute`, chosen in the order
// of a seeded permutation of the rows; rows already null are skipped. Fewer
// cells are nulled when the column runs out of values. Row order is not
// changed. Throws IneligibleTargetError or UsageError (rate outside (0, 1)).
GroundTruth inject(WarehouseModel& model, const Target& target, double rate, Rng& rng);
GroundTruth inject(WarehouseModel& model, const Target& target, double rate, std::uint64_t seed);

struct AttributeScore {
  std::size_t missing = 0;
  std::size_t replaced = 0;
  std::size_t correct = 0;

  std::optional<double> imputation_rate() const;
  std::optional<double> accuracy() const;
  AttributeScore& operator+=(const AttributeScore& other);
  bool operator==(const AttributeScore&) const = default;
};

struct TrialReport {
  // Keyed by "Dimension.Attribute".
  std::map<std::string, AttributeScore> attributes;
  AttributeScore pooled;
  double runtime_s = 0.0;
};

// Counts missing/replaced/correct per attribute. Every fill must target a
// ground-truth cell; anything else raises ProtocolError. Values compare
// exactly unless `fold_case`.
TrialReport score(const FillLog& fills, const GroundTruth& truth, bool fold_case = false);

struct TrialPlan {
  std::vector<Target> targets;
  std::vector<double> rates{0.01, 0.05, 0.10, 0.20, 0.30, 0.40, 0.50};
  std::size_t trials = 20;
  std::uint64_t seed = 0;
  ImputeConfig config;
  // Restricts scoring to the cells it accepts (both truth and fills).
  std::function<bool(const CellAddress&)> score_filter;
  unsigned jobs = 1;
};

struct RateSummary {
  double rate = 0.0;
  std::size_t trials = 0;
  // Means over trials where the metric is defined; nullopt if it never is.
  std::optional<double> imputation_rate;
  std::optional<double> accuracy;
  double runtime_s = 0.0;
  std::map<std::string, AttributeScore> attributes;  // summed over trials
  std::vector<TrialReport> reports;
};

// One trial: copy the model, inject every target with a stream seeded by
// `seed`, run the configured strategy (timed), and score it. Fills of cells
// that were already null before injection are not scored.
TrialReport run_trial(const WarehouseModel& model, const TrialPlan& plan, double rate, std::uint64_t seed);

// Trial i of every rate uses seed plan.seed + i.
std::vector<RateSummary> run_trials(const WarehouseModel& model, const TrialPlan& plan);

// CSV: rate,trials,imputation_rate,accuracy,runtime_s,strategy,policy.
// Undefined metrics are written as "n/a"; with `with_runtime` false the
// runtime column is "n/a" as well.
void write_results(const std::vector<RateSummary>& results, const ImputeConfig& config, std::ostream& out,
                   bool with_runtime = true);

// CSV: rate,dimension,attribute,missing,replaced,correct,imputation_rate,accuracy.
void write_attribute_breakdown(const std::vector<RateSummary>& results, std::ostream& out);

std::string format_metric(const std::optional<double>& value);

}  // namespace dwimpute
