// dwimpute: repair missing dimension values of a data warehouse.
//
//   dwimpute validate <schema>
//   dwimpute impute   <schema> --strategy S --policy P --out DIR
//   dwimpute inject   <schema> --attr D.A --rate R --seed N --out DIR
//   dwimpute evaluate <schema> --rates 1,5,10 --trials 20 --seed N --out DIR
//   dwimpute gen      --levels id,City,State --top 4 --fanout 10 --rows 1000 --out DIR
//
// Exit status: 0 success, 1 domain violation, 2 usage or I/O error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dwimpute/errors.hpp"
#include "dwimpute/eval.hpp"
#include "dwimpute/inter.hpp"
#include "dwimpute/pipeline.hpp"
#include "dwimpute/schema.hpp"
#include "dwimpute/schema_io.hpp"
#include "dwimpute/synthetic.hpp"

namespace fs = std::filesystem;
using namespace dwimpute;

namespace {

constexpr int kOk = 0;
constexpr int kDomain = 1;
constexpr int kUsage = 2;

struct RunConfig {
  std::string schema;
  std::string strategy = "intra-inter-intra";
  std::string policy = "first";
  double threshold = 0.8;
  std::vector<std::string> null_tokens;
  bool null_as_token = false;
  bool na_as_token = false;
  bool fold_case = false;
  std::string alias_path;
  int passes = 1;
  std::uint64_t seed = 0;
  std::string out;
  unsigned jobs = 1;
};

CsvOptions csv_options(const RunConfig& config) {
  CsvOptions csv;
  for (const auto& t : config.null_tokens) csv.null_tokens.insert(t);
  if (config.null_as_token) csv.null_tokens.insert("NULL");
  if (config.na_as_token) csv.null_tokens.insert("NA");
  return csv;
}

ImputeConfig impute_config(const RunConfig& config) {
  ImputeConfig out;
  out.strategy = parse_strategy(config.strategy);
  out.passes = config.passes;
  out.inter.policy.mode = parse_donor_mode(config.policy);
  out.inter.policy.fold_case = config.fold_case;
  out.inter.match.threshold = config.threshold;
  out.inter.match.check();
  if (!config.alias_path.empty()) out.inter.aliases = load_alias_map(config.alias_path);
  if (out.passes < 1) throw UsageError("--passes must be at least 1");
  return out;
}

void add_common(CLI::App& command, RunConfig& config) {
  command.add_option("schema", config.schema, "Schema JSON file")->required();
  command.add_option("--null-token", config.null_tokens, "Extra text treated as null on input (repeatable)");
  command.add_flag("--null-as-missing", config.null_as_token, "Treat the text NULL as a missing value");
  command.add_flag("--na-as-missing", config.na_as_token, "Treat the text NA as a missing value");
}

void add_imputation(CLI::App& command, RunConfig& config) {
  command.add_option("--strategy", config.strategy, "intra | inter | intra-inter-intra")
      ->check(CLI::IsMember({"intra", "inter", "intra-inter-intra"}));
  command.add_option("--policy", config.policy, "Donor policy: first | majority")
      ->check(CLI::IsMember({"first", "majority"}));
  command.add_option("--threshold", config.threshold, "Attribute-name similarity threshold")
      ->check(CLI::Range(0.0, 1.0));
  command.add_option("--alias", config.alias_path, "JSON alias map of equivalent attributes")
      ->check(CLI::ExistingFile);
  command.add_option("--passes", config.passes, "Repetitions of the strategy sequence")->check(CLI::PositiveNumber);
  command.add_flag("--fold-case", config.fold_case, "Compare values case-insensitively");
}

fs::path prepare_out(const RunConfig& config) {
  if (config.out.empty()) throw UsageError("--out is required");
  const fs::path out = config.out;
  fs::create_directories(out);
  const auto schema_dir = fs::absolute(fs::path(config.schema)).parent_path();
  if (fs::equivalent(out, schema_dir)) {
    throw UsageError("--out must differ from the schema directory; inputs are never overwritten");
  }
  return out;
}

// Files written by a command; removed again if the command fails midway.
class OutputSet {
 public:
  void add(fs::path path) { paths_.push_back(std::move(path)); }
  void add(const std::vector<fs::path>& paths) { paths_.insert(paths_.end(), paths.begin(), paths.end()); }
  void commit() { committed_ = true; }
  ~OutputSet() {
    if (committed_) return;
    std::error_code ignored;
    for (const auto& p : paths_) fs::remove(p, ignored);
  }

 private:
  std::vector<fs::path> paths_;
  bool committed_ = false;
};

std::ofstream open_out(const fs::path& path, OutputSet& outputs) {
  outputs.add(path);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

int cmd_validate(const RunConfig& config) {
  const auto model = load_model(config.schema, csv_options(config));
  const auto report = validate_schema(model);
  for (const auto& v : report) std::cout << to_string(v) << '\n';
  if (!report.empty()) return kDomain;
  std::cout << "ok: " << model.dimensions.size() << " dimension(s), schema is valid\n";
  return kOk;
}

int cmd_impute(const RunConfig& config) {
  auto model = load_model(config.schema, csv_options(config));
  const auto impute = impute_config(config);
  require_valid(model);
  const auto out = prepare_out(config);
  OutputSet outputs;

  if (impute.strategy != Strategy::kIntra) {
    const auto links =
        discover_links(model, impute.inter.match, impute.inter.aliases.empty() ? nullptr : &impute.inter.aliases);
    auto links_out = open_out(out / "links.json", outputs);
    links_out << links_to_json(links).dump(2) << '\n';
  }

  const auto log = run_strategy(model, impute);

  auto fills = open_out(out / "fills.csv", outputs);
  write_fill_log(log, fills);

  nlohmann::json summary;
  summary["strategy"] = std::string(to_string(impute.strategy));
  summary["policy"] = std::string(to_string(impute.inter.policy.mode));
  summary["passes"] = impute.passes;
  summary["fills"] = log.size();
  std::map<std::string, std::size_t> by_source{{"intra", 0}, {"inter", 0}};
  std::map<std::string, std::map<std::string, std::size_t>> per_attribute;
  for (const auto& fill : log) {
    const std::string source(to_string(fill.source));
    ++by_source[source];
    ++per_attribute[fill.target.dimension + "." + fill.target.attribute][source];
  }
  summary["by_source"] = by_source;
  summary["attributes"] = nlohmann::json::object();
  for (const auto& d : model.dimensions) {
    for (std::size_t c = 0; c < d.table.column_count(); ++c) {
      const auto key = d.name + "." + d.table.columns()[c];
      std::size_t nulls = 0;
      for (std::size_t r = 0; r < d.table.row_count(); ++r) nulls += !d.table.at(r, c).has_value();
      auto entry = nlohmann::json::object();
      entry["intra"] = per_attribute[key]["intra"];
      entry["inter"] = per_attribute[key]["inter"];
      entry["remaining_nulls"] = nulls;
      summary["attributes"][key] = entry;
    }
  }

  outputs.add(save_model(model, out));
  auto summary_out = open_out(out / "summary.json", outputs);
  summary_out << summary.dump(2) << '\n';
  outputs.commit();

  std::cout << "filled " << log.size() << " cell(s) (intra " << by_source["intra"] << ", inter "
            << by_source["inter"] << "); outputs in " << out.string() << '\n';
  return kOk;
}

double percent_to_rate(double percent) {
  if (!(percent > 0.0 && percent < 100.0)) {
    throw UsageError("missing rate must be a percentage in (0, 100), got " + std::to_string(percent));
  }
  return percent / 100.0;
}

int cmd_inject(const RunConfig& config, const std::vector<std::string>& attrs, double rate_percent) {
  auto model = load_model(config.schema, csv_options(config));
  require_valid(model);
  std::vector<Target> targets;
  for (const auto& a : attrs) targets.push_back(parse_target(a));
  require_eligible(model, targets);
  const double rate = percent_to_rate(rate_percent);
  const auto out = prepare_out(config);
  OutputSet outputs;

  Rng rng(config.seed);
  GroundTruth truth;
  for (const auto& target : targets) {
    const auto part = inject(model, target, rate, rng);
    std::cout << to_string(target) << ": nulled " << part.entries.size() << " of " << part.requested
              << " requested cell(s)\n";
    truth.merge(part);
  }

  outputs.add(save_model(model, out));
  auto truth_out = open_out(out / "truth.csv", outputs);
  truth_out << "dimension,row,attribute,value\n";
  for (const auto& [address, value] : truth.entries) {
    truth_out << csv_escape(address.dimension) << ',' << address.row << ',' << csv_escape(address.attribute) << ','
              << csv_escape(value) << '\n';
  }
  outputs.commit();
  return kOk;
}

int cmd_evaluate(const RunConfig& config, const std::vector<double>& rates_percent, std::size_t trials,
                 const std::vector<std::string>& attrs, bool no_timing) {
  const auto model = load_model(config.schema, csv_options(config));
  require_valid(model);

  TrialPlan plan;
  plan.config = impute_config(config);
  plan.trials = trials;
  plan.seed = config.seed;
  plan.jobs = config.jobs;
  plan.rates.clear();
  for (const auto p : rates_percent) plan.rates.push_back(percent_to_rate(p));
  if (attrs.empty()) {
    plan.targets = eligible_targets(model);
    if (plan.targets.empty()) throw IneligibleTargetError("the schema has no eligible evaluation targets");
  } else {
    for (const auto& a : attrs) plan.targets.push_back(parse_target(a));
  }
  require_eligible(model, plan.targets);
  const auto out = prepare_out(config);
  OutputSet outputs;

  const auto results = run_trials(model, plan);

  auto results_out = open_out(out / "results.csv", outputs);
  write_results(results, plan.config, results_out, !no_timing);
  auto breakdown_out = open_out(out / "attributes.csv", outputs);
  write_attribute_breakdown(results, breakdown_out);
  outputs.commit();

  std::printf("%-8s %-7s %-16s %-10s %s\n", "rate", "trials", "imputation_rate", "accuracy", "runtime_s");
  for (const auto& r : results) {
    std::printf("%-8g %-7zu %-16s %-10s %.3f\n", r.rate * 100.0, r.trials, format_metric(r.imputation_rate).c_str(),
                format_metric(r.accuracy).c_str(), r.runtime_s);
  }
  return kOk;
}

int cmd_gen(SyntheticSpec spec, const std::string& out_dir, bool split, std::uint64_t split_seed) {
  if (out_dir.empty()) throw UsageError("--out is required");
  auto data = generate_synthetic(spec);
  if (split) {
    data.model = split_dimension(data.model, spec.dimension, random_halves(spec.rows, split_seed),
                                 {spec.dimension + "A", spec.dimension + "B", "a_", "b_"});
  }
  OutputSet outputs;
  outputs.add(save_model(data.model, out_dir));
  outputs.commit();
  std::cout << "wrote " << (split ? 2 : 1) << " dimension(s) to " << out_dir << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Repair missing dimension values in a data warehouse"};
  app.set_config("--config", "", "TOML/INI file with option defaults; flags take precedence");
  app.require_subcommand(1);

  RunConfig config;

  auto* validate = app.add_subcommand("validate", "Check a schema and its tables");
  add_common(*validate, config);

  auto* impute = app.add_subcommand("impute", "Fill missing values and write repaired tables");
  add_common(*impute, config);
  add_imputation(*impute, config);
  impute->add_option("--out", config.out, "Output directory")->required();

  std::vector<std::string> inject_attrs;
  double inject_rate = 10.0;
  auto* inject_cmd = app.add_subcommand("inject", "Null a percentage of an attribute's values");
  add_common(*inject_cmd, config);
  inject_cmd->add_option("--attr", inject_attrs, "Target as Dimension.Attribute (repeatable)")->required();
  inject_cmd->add_option("--rate", inject_rate, "Missing rate in percent");
  inject_cmd->add_option("--seed", config.seed, "Shuffle seed");
  inject_cmd->add_option("--out", config.out, "Output directory")->required();

  std::vector<double> rates{1, 5, 10, 20, 30, 40, 50};
  std::size_t trials = 20;
  std::vector<std::string> eval_attrs;
  bool no_timing = false;
  auto* evaluate = app.add_subcommand("evaluate", "Run the injection/imputation/scoring protocol");
  add_common(*evaluate, config);
  add_imputation(*evaluate, config);
  evaluate->add_option("--rates", rates, "Missing rates in percent")->delimiter(',');
  evaluate->add_option("--trials", trials, "Trials per rate")->check(CLI::PositiveNumber);
  evaluate->add_option("--seed", config.seed, "Seed of trial 0; trial i uses seed + i");
  evaluate->add_option("--targets", eval_attrs, "Targets as Dimension.Attribute (default: all eligible)")
      ->delimiter(',');
  evaluate->add_option("--jobs", config.jobs, "Parallel trials")->check(CLI::PositiveNumber);
  evaluate->add_flag("--no-timing", no_timing, "Write n/a instead of measured runtimes");
  evaluate->add_option("--out", config.out, "Output directory")->required();

  SyntheticSpec spec;
  std::string gen_out;
  bool split = false;
  std::uint64_t split_seed = 7;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic hierarchical dimension");
  gen->add_option("--name", spec.dimension, "Dimension name");
  gen->add_option("--levels", spec.levels, "Parameter names, identifier first")->delimiter(',');
  gen->add_option("--top", spec.top_values, "Distinct values at the coarsest level");
  gen->add_option("--fanout", spec.fanout, "Children per parent, finest level first")->delimiter(',');
  gen->add_option("--rows", spec.rows, "Number of rows");
  gen->add_option("--weak", spec.weak, "Weak attributes per level")->delimiter(',');
  gen->add_option("--nonstrict", spec.nonstrict_fraction, "Fraction of level-1 values with two parents");
  gen->add_option("--seed", spec.seed, "Generator seed");
  gen->add_flag("--split", split, "Split the rows into two half-dimensions with a_/b_ prefixes");
  gen->add_option("--split-seed", split_seed, "Seed of the split");
  gen->add_option("--out", gen_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*validate) return cmd_validate(config);
    if (*impute) return cmd_impute(config);
    if (*inject_cmd) return cmd_inject(config, inject_attrs, inject_rate);
    if (*evaluate) return cmd_evaluate(config, rates, trials, eval_attrs, no_timing);
    if (*gen) return cmd_gen(spec, gen_out, split, split_seed);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomain;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
