#include "dwimpute/matcher.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include <nlohmann/json.hpp>

#include "dwimpute/errors.hpp"

namespace dwimpute {

namespace {

std::string fold(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

bool is_separator(char c) { return c == '_' || c == '-' || c == ' '; }

bool strip_separators(std::string& s) {
  const auto before = s.size();
  while (!s.empty() && is_separator(s.front())) s.erase(s.begin());
  while (!s.empty() && is_separator(s.back())) s.pop_back();
  return s.size() != before;
}

}  // namespace

void MatchConfig::check() const {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw UsageError("match threshold must lie in [0, 1], got " + std::to_string(threshold));
  }
}

void AliasMap::add(std::string dimension_a, std::string attribute_a, std::string dimension_b,
                   std::string attribute_b) {
  pairs_.emplace(dimension_a, attribute_a, dimension_b, attribute_b);
  pairs_.emplace(std::move(dimension_b), std::move(attribute_b), std::move(dimension_a), std::move(attribute_a));
}

bool AliasMap::contains(std::string_view dimension_a, std::string_view attribute_a, std::string_view dimension_b,
                        std::string_view attribute_b) const {
  return pairs_.contains(Key{dimension_a, attribute_a, dimension_b, attribute_b});
}

AliasMap load_alias_map(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open alias map '" + path.string() + "'");
  nlohmann::json document;
  try {
    document = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError("alias map '" + path.string() + "' is not valid JSON: " + e.what());
  }
  if (!document.is_array()) throw FormatError("alias map /: expected an array");
  AliasMap aliases;
  for (std::size_t i = 0; i < document.size(); ++i) {
    const auto& entry = document[i];
    const std::string pointer = "/" + std::to_string(i);
    if (!entry.is_object()) throw FormatError("alias map " + pointer + ": expected an object");
    for (const auto& [key, value] : entry.items()) {
      if (key != "dimension_a" && key != "attribute_a" && key != "dimension_b" && key != "attribute_b") {
        throw FormatError("alias map " + pointer + "/" + key + ": unknown field");
      }
      if (!value.is_string()) throw FormatError("alias map " + pointer + "/" + key + ": expected a string");
    }
    for (const char* key : {"dimension_a", "attribute_a", "dimension_b", "attribute_b"}) {
      if (!entry.contains(key)) throw FormatError("alias map " + pointer + "/" + key + ": missing required field");
    }
    aliases.add(entry["dimension_a"], entry["attribute_a"], entry["dimension_b"], entry["attribute_b"]);
  }
  return aliases;
}

std::string normalize(std::string_view name, const MatchConfig& config, std::string_view owner) {
  std::string s = config.case_fold ? fold(name) : std::string(name);

  std::vector<std::string> tokens;
  for (const auto& t : config.strip_tokens) tokens.push_back(config.case_fold ? fold(t) : t);
  tokens.push_back(config.case_fold ? fold(owner) : std::string(owner));
  std::erase_if(tokens, [](const std::string& t) { return t.empty(); });
  std::sort(tokens.begin(), tokens.end(), [](const std::string& x, const std::string& y) {
    return x.size() != y.size() ? x.size() > y.size() : x < y;
  });

  auto strip_prefix = [&]() {
    for (const auto& t : tokens) {
      if (s.starts_with(t)) {
        s.erase(0, t.size());
        return true;
      }
    }
    // "c_nationkey", "S_City": one letter then an underscore.
    if (s.size() > 2 && std::isalpha(static_cast<unsigned char>(s[0])) && s[1] == '_') {
      s.erase(0, 2);
      return true;
    }
    return false;
  };
  auto strip_suffix = [&]() {
    for (const auto& t : tokens) {
      if (s.ends_with(t)) {
        s.erase(s.size() - t.size());
        return true;
      }
    }
    return false;
  };

  // Iterating to a fixpoint keeps normalize idempotent for names such as
  // "c_c_key" that carry a token twice.
  bool changed = true;
  while (changed && !s.empty()) {
    changed = strip_separators(s);
    changed = strip_prefix() || changed;
    changed = strip_separators(s) || changed;
    changed = strip_suffix() || changed;
  }
  strip_separators(s);
  return s;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> previous(b.size() + 1);
  std::vector<std::size_t> current(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) previous[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    current[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t substitution = previous[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      current[j] = std::min({previous[j] + 1, current[j - 1] + 1, substitution});
    }
    std::swap(previous, current);
  }
  return previous[b.size()];
}

double similarity(std::string_view a, std::string_view b) {
  const auto longest = std::max(a.size(), b.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(edit_distance(a, b)) / static_cast<double>(longest);
}

MatchDecision attributes_match(std::string_view a, std::string_view owner_a, std::string_view b,
                               std::string_view owner_b, const MatchConfig& config, const AliasMap* aliases) {
  MatchDecision decision{std::string(a), std::string(b), 0.0, false};
  if (aliases && aliases->contains(owner_a, a, owner_b, b)) {
    decision.score = 1.0;
    decision.matched = true;
    return decision;
  }
  const auto na = normalize(a, config, owner_a);
  const auto nb = normalize(b, config, owner_b);
  if (na.empty() || nb.empty()) return decision;
  decision.score = similarity(na, nb);
  decision.matched = decision.score >= config.threshold;
  return decision;
}

std::optional<BestMatch> best_match(std::string_view attribute, std::string_view owner,
                                    const std::vector<std::string>& candidates, std::string_view candidate_owner,
                                    const MatchConfig& config, const AliasMap* aliases) {
  std::optional<BestMatch> best;
  for (const auto& candidate : candidates) {
    auto decision = attributes_match(attribute, owner, candidate, candidate_owner, config, aliases);
    if (!decision.matched) continue;
    if (!best || decision.score > best->decision.score) best = BestMatch{candidate, std::move(decision)};
  }
  return best;
}

}  // namespace dwimpute
