#include "dwimpute/eval.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <ostream>

#include "donor_index.hpp"

namespace dwimpute {

std::uint64_t Rng::below(std::uint64_t bound) {
  // Rejection sampling removes the modulo bias of engine() % bound.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = engine_();
    if (x >= threshold) return x % bound;
  }
}

std::vector<std::size_t> Rng::permutation(std::size_t n) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(below(i));
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

std::string to_string(const Target& target) { return target.dimension + "." + target.attribute; }

Target parse_target(std::string_view text) {
  const auto dot = text.find('.');
  if (dot == std::string_view::npos || dot == 0 || dot + 1 == text.size()) {
    throw UsageError("target '" + std::string(text) + "' must look like Dimension.Attribute");
  }
  return {std::string(text.substr(0, dot)), std::string(text.substr(dot + 1))};
}

bool is_eligible(const Dimension& dimension, std::string_view attribute) {
  for (const auto& h : dimension.hierarchies) {
    if (auto index = h.parameter_index(attribute); index && *index >= 2) return true;
    if (auto owner = h.weak_owner(attribute)) {
      if (auto index = h.parameter_index(*owner); index && *index >= 1) return true;
    }
  }
  return false;
}

void require_eligible(const WarehouseModel& model, const std::vector<Target>& targets) {
  std::string problems;
  for (const auto& target : targets) {
    const auto* dimension = model.find_dimension(target.dimension);
    if (!dimension) {
      problems += "\n  " + to_string(target) + ": no such dimension";
    } else if (!dimension->table.has_column(target.attribute)) {
      problems += "\n  " + to_string(target) + ": no such attribute";
    } else if (!is_eligible(*dimension, target.attribute)) {
      problems += "\n  " + to_string(target) +
                  ": not eligible. Identifier values never repeat, so only parameters from the third level of a "
                  "hierarchy (0-based level >= 2) and weak attributes from the second level (0-based level >= 1) "
                  "can be completed and are used as injection targets";
    }
  }
  if (!problems.empty()) throw IneligibleTargetError("ineligible evaluation target(s):" + problems);
}

std::vector<Target> eligible_targets(const WarehouseModel& model) {
  std::vector<Target> out;
  for (const auto& d : model.dimensions) {
    for (const auto& a : d.attributes) {
      if (is_eligible(d, a)) out.push_back({d.name, a});
    }
  }
  return out;
}

void GroundTruth::merge(const GroundTruth& other) {
  entries.insert(other.entries.begin(), other.entries.end());
  requested += other.requested;
}

GroundTruth inject(WarehouseModel& model, const Target& target, double rate, Rng& rng) {
  if (!(rate > 0.0 && rate < 1.0)) throw UsageError("missing rate must lie in (0, 1), got " + std::to_string(rate));
  require_eligible(model, {target});
  auto& table = model.dimension(target.dimension).table;
  const auto column = table.column_index(target.attribute);

  GroundTruth truth;
  // The epsilon keeps e.g. 0.29 * 100 from flooring to 28.
  truth.requested = static_cast<std::size_t>(std::floor(rate * static_cast<double>(table.row_count()) + 1e-9));
  for (const auto r : rng.permutation(table.row_count())) {
    if (truth.entries.size() == truth.requested) break;
    auto& cell = table.at(r, column);
    if (!cell) continue;
    truth.entries.emplace(CellAddress{target.dimension, r, target.attribute}, std::move(*cell));
    cell.reset();
  }
  return truth;
}

GroundTruth inject(WarehouseModel& model, const Target& target, double rate, std::uint64_t seed) {
  Rng rng(seed);
  return inject(model, target, rate, rng);
}

std::optional<double> AttributeScore::imputation_rate() const {
  if (missing == 0) return std::nullopt;
  return static_cast<double>(replaced) / static_cast<double>(missing);
}

std::optional<double> AttributeScore::accuracy() const {
  if (replaced == 0) return std::nullopt;
  return static_cast<double>(correct) / static_cast<double>(replaced);
}

AttributeScore& AttributeScore::operator+=(const AttributeScore& other) {
  missing += other.missing;
  replaced += other.replaced;
  correct += other.correct;
  return *this;
}

TrialReport score(const FillLog& fills, const GroundTruth& truth, bool fold_case) {
  TrialReport report;
  for (const auto& [address, value] : truth.entries) {
    ++report.attributes[address.dimension + "." + address.attribute].missing;
  }
  std::map<CellAddress, bool> seen;
  for (const auto& fill : fills) {
    const auto it = truth.entries.find(fill.target);
    if (it == truth.entries.end()) {
      throw ProtocolError("fill at " + to_string(fill.target) + " does not correspond to an injected cell");
    }
    if (!seen.emplace(fill.target, true).second) {
      throw ProtocolError("cell " + to_string(fill.target) + " was filled more than once");
    }
    auto& entry = report.attributes[fill.target.dimension + "." + fill.target.attribute];
    ++entry.replaced;
    if (detail::match_key(fill.value, fold_case) == detail::match_key(it->second, fold_case)) ++entry.correct;
  }
  for (const auto& [name, entry] : report.attributes) report.pooled += entry;
  return report;
}

TrialReport run_trial(const WarehouseModel& model, const TrialPlan& plan, double rate, std::uint64_t seed) {
  WarehouseModel copy = model;
  Rng rng(seed);
  GroundTruth truth;
  for (const auto& target : plan.targets) truth.merge(inject(copy, target, rate, rng));

  const auto start = std::chrono::steady_clock::now();
  FillLog fills = run_strategy(copy, plan.config);
  const auto stop = std::chrono::steady_clock::now();

  // Cells that were null before injection are repairs of the source data,
  // not part of the experiment.
  std::erase_if(fills, [&](const FillRecord& fill) {
    if (truth.entries.contains(fill.target)) return false;
    const auto& table = model.dimension(fill.target.dimension).table;
    return !table.at(fill.target.row, table.column_index(fill.target.attribute)).has_value();
  });
  if (plan.score_filter) {
    std::erase_if(fills, [&](const FillRecord& fill) { return !plan.score_filter(fill.target); });
    std::erase_if(truth.entries, [&](const auto& entry) { return !plan.score_filter(entry.first); });
  }

  auto report = score(fills, truth, plan.config.inter.policy.fold_case);
  report.runtime_s = std::chrono::duration<double>(stop - start).count();
  return report;
}

std::vector<RateSummary> run_trials(const WarehouseModel& model, const TrialPlan& plan) {
  if (plan.trials < 1) throw UsageError("trials must be at least 1");
  require_valid(model);
  require_eligible(model, plan.targets);
  plan.config.inter.match.check();

  std::vector<RateSummary> results(plan.rates.size());
  for (std::size_t k = 0; k < plan.rates.size(); ++k) {
    results[k].rate = plan.rates[k];
    results[k].trials = plan.trials;
    results[k].reports.resize(plan.trials);
  }

  // Trial-major order: trial i runs at every rate before trial i + 1, so
  // slow stretches of the machine do not land on a single rate's timings.
  std::vector<std::pair<std::size_t, std::size_t>> tasks;  // (trial, rate index)
  for (std::size_t i = 0; i < plan.trials; ++i) {
    for (std::size_t k = 0; k < plan.rates.size(); ++k) tasks.emplace_back(i, k);
  }
  const unsigned jobs = std::max(1u, plan.jobs);
  for (std::size_t begin = 0; begin < tasks.size(); begin += jobs) {
    const std::size_t end = std::min<std::size_t>(tasks.size(), begin + jobs);
    if (jobs == 1) {
      const auto [i, k] = tasks[begin];
      results[k].reports[i] = run_trial(model, plan, plan.rates[k], plan.seed + i);
      continue;
    }
    std::vector<std::future<TrialReport>> pending;
    for (std::size_t t = begin; t < end; ++t) {
      const auto [i, k] = tasks[t];
      pending.push_back(std::async(std::launch::async, [&, i, k] {
        return run_trial(model, plan, plan.rates[k], plan.seed + i);
      }));
    }
    for (std::size_t t = begin; t < end; ++t) {
      const auto [i, k] = tasks[t];
      results[k].reports[i] = pending[t - begin].get();
    }
  }

  for (auto& summary : results) {
    double rate_sum = 0.0;
    double accuracy_sum = 0.0;
    double runtime_sum = 0.0;
    std::size_t rate_n = 0;
    std::size_t accuracy_n = 0;
    for (const auto& report : summary.reports) {
      if (auto r = report.pooled.imputation_rate()) {
        rate_sum += *r;
        ++rate_n;
      }
      if (auto a = report.pooled.accuracy()) {
        accuracy_sum += *a;
        ++accuracy_n;
      }
      runtime_sum += report.runtime_s;
      for (const auto& [name, entry] : report.attributes) summary.attributes[name] += entry;
    }
    if (rate_n) summary.imputation_rate = rate_sum / static_cast<double>(rate_n);
    if (accuracy_n) summary.accuracy = accuracy_sum / static_cast<double>(accuracy_n);
    summary.runtime_s = runtime_sum / static_cast<double>(plan.trials);
  }
  return results;
}

std::string format_metric(const std::optional<double>& value) {
  if (!value) return "n/a";
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.6f", *value);
  return buffer;
}

namespace {

std::string format_rate(double rate) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.4g", rate);
  return buffer;
}

}  // namespace

void write_results(const std::vector<RateSummary>& results, const ImputeConfig& config, std::ostream& out,
                   bool with_runtime) {
  out << "rate,trials,imputation_rate,accuracy,runtime_s,strategy,policy\n";
  for (const auto& r : results) {
    std::string runtime = "n/a";
    if (with_runtime) {
      char buffer[32];
      std::snprintf(buffer, sizeof buffer, "%.3f", r.runtime_s);
      runtime = buffer;
    }
    out << format_rate(r.rate) << ',' << r.trials << ',' << format_metric(r.imputation_rate) << ','
        << format_metric(r.accuracy) << ',' << runtime << ',' << to_string(config.strategy) << ','
        << to_string(config.inter.policy.mode) << '\n';
  }
}

void write_attribute_breakdown(const std::vector<RateSummary>& results, std::ostream& out) {
  out << "rate,dimension,attribute,missing,replaced,correct,imputation_rate,accuracy\n";
  for (const auto& r : results) {
    for (const auto& [name, entry] : r.attributes) {
      const auto dot = name.find('.');
      out << format_rate(r.rate) << ',' << csv_escape(name.substr(0, dot)) << ',' << csv_escape(name.substr(dot + 1))
          << ',' << entry.missing << ',' << entry.replaced << ',' << entry.correct << ','
          << format_metric(entry.imputation_rate()) << ',' << format_metric(entry.accuracy()) << '\n';
    }
  }
}

}  // namespace dwimpute
