#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace dwimpute {

struct MatchConfig {
  double threshold = 0.8;
  // Extra tokens stripped from either end of a name. The owning dimension's
  // name and single-letter prefixes such as "c_" are always stripped.
  std::vector<std::string> strip_tokens;
  bool case_fold = true;

  // Throws UsageError when the threshold is outside [0, 1].
  void check() const;
};

struct MatchDecision {
  std::string a;
  std::string b;
  double score = 0.0;
  bool matched = false;
};

// Attribute pairs declared equivalent by the user. Lookups are symmetric.
class AliasMap {
 public:
  void add(std::string dimension_a, std::string attribute_a, std::string dimension_b, std::string attribute_b);
  bool contains(std::string_view dimension_a, std::string_view attribute_a, std::string_view dimension_b,
                std::string_view attribute_b) const;
  bool empty() const { return pairs_.empty(); }
  std::size_t size() const { return pairs_.size(); }

 private:
  using Key = std::tuple<std::string, std::string, std::string, std::string>;
  std::set<Key> pairs_;
};

// Reads a JSON list of {dimension_a, attribute_a, dimension_b, attribute_b}.
AliasMap load_alias_map(const std::filesystem::path& path);

// Case-folds, then repeatedly strips prefix/suffix tokens (longest first) and
// separator characters until the name stops changing.
std::string normalize(std::string_view name, const MatchConfig& config, std::string_view owner);

std::size_t edit_distance(std::string_view a, std::string_view b);

// 1 - levenshtein(a, b) / max(|a|, |b|), byte-wise; 1 for two empty strings.
double similarity(std::string_view a, std::string_view b);

MatchDecision attributes_match(std::string_view a, std::string_view owner_a, std::string_view b,
                               std::string_view owner_b, const MatchConfig& config, const AliasMap* aliases = nullptr);

struct BestMatch {
  std::string attribute;
  MatchDecision decision;
};

// Highest-scoring matched candidate, earliest candidate on ties.
std::optional<BestMatch> best_match(std::string_view attribute, std::string_view owner,
                                    const std::vector<std::string>& candidates, std::string_view candidate_owner,
                                    const MatchConfig& config, const AliasMap* aliases = nullptr);

}  // namespace dwimpute
