#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>

#include "dwimpute/fill.hpp"
#include "dwimpute/table.hpp"

namespace dwimpute::detail {

inline std::string match_key(const std::string& value, bool fold_case) {
  if (!fold_case) return value;
  std::string out = value;
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

// Donor candidates of one matching level: rows of `donors` whose key column
// and target column are both non-null, grouped by key value.
class DonorIndex {
 public:
  DonorIndex(const InstanceTable& donors, std::size_t key_column, std::size_t target_column, DonorPolicy policy)
      : donors_(donors), key_column_(key_column), target_column_(target_column), policy_(policy) {
    for (std::size_t r = 0; r < donors.row_count(); ++r) add(r);
  }

  // Registers row `r` as a donor if it qualifies. Rows may be added out of
  // order (a freshly filled row); `first` still resolves to the lowest index.
  void add(std::size_t r) {
    const auto& key = donors_.at(r, key_column_);
    const auto& target = donors_.at(r, target_column_);
    if (!key || !target) return;
    auto& group = groups_[match_key(*key, policy_.fold_case)];
    if (!group.first_row || r < *group.first_row) group.first_row = r;
    if (policy_.mode == DonorPolicy::Mode::kMajority) {
      auto& tally = group.tallies[*target];
      ++tally.count;
      tally.first_row = std::min(tally.first_row, r);
    }
  }

  // Donor row for a target whose value at the matching level is `key`.
  std::optional<std::size_t> choose(const std::string& key) const {
    const auto it = groups_.find(match_key(key, policy_.fold_case));
    if (it == groups_.end() || !it->second.first_row) return std::nullopt;
    const auto& group = it->second;
    if (policy_.mode == DonorPolicy::Mode::kFirst) return group.first_row;
    // std::map iterates values in lexicographic order, so a strict > keeps
    // the smallest value among equally frequent candidates.
    const Tally* best = nullptr;
    for (const auto& [value, tally] : group.tallies) {
      if (!best || tally.count > best->count) best = &tally;
    }
    return best->first_row;
  }

 private:
  struct Tally {
    std::size_t count = 0;
    std::size_t first_row = static_cast<std::size_t>(-1);
  };
  struct Group {
    std::optional<std::size_t> first_row;
    std::map<std::string, Tally> tallies;
  };

  const InstanceTable& donors_;
  std::size_t key_column_;
  std::size_t target_column_;
  DonorPolicy policy_;
  std::unordered_map<std::string, Group> groups_;
};

}  // namespace dwimpute::detail
