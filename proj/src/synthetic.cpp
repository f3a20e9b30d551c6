#include "dwimpute/synthetic.hpp"

#include <algorithm>

#include "dwimpute/errors.hpp"
#include "dwimpute/eval.hpp"

namespace dwimpute {

std::string weak_attribute_name(const std::string& level, std::size_t ordinal) {
  return ordinal == 0 ? level + "Name" : level + "Attr" + std::to_string(ordinal + 1);
}

namespace {

void check_spec(const SyntheticSpec& spec) {
  const auto n = spec.levels.size();
  if (n < 2) throw UsageError("synthetic dimension needs an identifier and at least one more level");
  if (spec.fanout.size() != n - 2) {
    throw UsageError("fanout needs " + std::to_string(n - 2) + " entries for " + std::to_string(n) + " levels");
  }
  if (spec.top_values == 0) throw UsageError("top_values must be at least 1");
  for (auto f : spec.fanout) {
    if (f == 0) throw UsageError("fanout must be at least 1 per level");
  }
  if (spec.rows == 0) throw UsageError("rows must be at least 1");
  if (spec.weak.size() > n) throw UsageError("more weak counts than levels");
  if (!(spec.nonstrict_fraction >= 0.0 && spec.nonstrict_fraction <= 1.0)) {
    throw UsageError("nonstrict fraction must lie in [0, 1]");
  }
}

}  // namespace

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  check_spec(spec);
  const auto n = spec.levels.size();

  // counts[k] = number of distinct values at level k (k >= 1).
  std::vector<std::size_t> counts(n, 0);
  counts[n - 1] = spec.top_values;
  for (std::size_t k = n - 1; k-- > 1;) counts[k] = counts[k + 1] * spec.fanout[k - 1];
  const std::size_t leaves = counts[1];

  Rng rng(spec.seed);
  const auto conflicted_count =
      static_cast<std::size_t>(spec.nonstrict_fraction * static_cast<double>(leaves) + 1e-9);
  std::vector<bool> conflicted_leaf(leaves, false);
  if (conflicted_count > 0) {
    if (n < 3) throw UsageError("non-strict data needs a level above level 1");
    if (counts[2] < 2) throw UsageError("non-strict data needs at least two values at level 2");
    if (n > 3 && spec.fanout[1] < 2) throw UsageError("non-strict data needs a level-3 fanout of at least 2");
    const auto order = rng.permutation(leaves);
    for (std::size_t i = 0; i < conflicted_count; ++i) conflicted_leaf[order[i]] = true;
  }

  Dimension d;
  d.name = spec.dimension;
  d.id_attribute = spec.levels[0];
  Hierarchy h;
  h.name = "Main";
  h.parameters = spec.levels;
  for (std::size_t k = 0; k < n; ++k) {
    d.attributes.push_back(spec.levels[k]);
    const std::size_t weak_count = k < spec.weak.size() ? spec.weak[k] : 0;
    for (std::size_t j = 0; j < weak_count; ++j) {
      auto name = weak_attribute_name(spec.levels[k], j);
      d.attributes.push_back(name);
      h.weak[spec.levels[k]].push_back(std::move(name));
    }
  }
  d.hierarchies.push_back(std::move(h));
  d.table = InstanceTable(d.attributes);

  // Rows cycle through the leaves; the permutation scatters them.
  const auto placement = rng.permutation(spec.rows);
  std::vector<std::size_t> seen_per_leaf(leaves, 0);
  SyntheticData data;
  data.conflicted_rows.assign(spec.rows, false);

  for (std::size_t r = 0; r < spec.rows; ++r) {
    std::vector<std::size_t> node(n, 0);
    node[1] = placement[r] % leaves;
    if (n > 2) {
      node[2] = node[1] / spec.fanout[0];
      if (conflicted_leaf[node[1]]) {
        data.conflicted_rows[r] = true;
        // Every other row of a conflicted leaf rolls up to a sibling parent,
        // so levels above 2 stay strict.
        if (seen_per_leaf[node[1]]++ % 2 == 1) {
          const std::size_t group = n > 3 ? spec.fanout[1] : counts[2];
          const std::size_t base = node[2] - node[2] % group;
          node[2] = base + (node[2] - base + 1) % group;
        }
      }
      for (std::size_t k = 3; k < n; ++k) node[k] = node[k - 1] / spec.fanout[k - 2];
    }

    Row row;
    row.emplace_back(std::to_string(r + 1));
    for (std::size_t j = 0; j < (spec.weak.empty() ? 0 : spec.weak[0]); ++j) {
      row.emplace_back(weak_attribute_name(spec.levels[0], j) + "_" + std::to_string(r + 1));
    }
    for (std::size_t k = 1; k < n; ++k) {
      const auto label = std::to_string(node[k]);
      row.emplace_back(spec.levels[k] + "_" + label);
      const std::size_t weak_count = k < spec.weak.size() ? spec.weak[k] : 0;
      for (std::size_t j = 0; j < weak_count; ++j) {
        row.emplace_back(weak_attribute_name(spec.levels[k], j) + "_" + label);
      }
    }
    d.table.append_row(std::move(row));
  }

  data.model.name = "synthetic";
  data.model.dimensions.push_back(std::move(d));
  return data;
}

WarehouseModel split_dimension(const WarehouseModel& model, const std::string& dimension,
                               const std::vector<bool>& in_first, const SplitSpec& spec) {
  const auto& source = model.dimension(dimension);
  if (in_first.size() != source.table.row_count()) {
    throw UsageError("split assignment has " + std::to_string(in_first.size()) + " entries for " +
                     std::to_string(source.table.row_count()) + " rows");
  }

  auto make_half = [&](const std::string& name, const std::string& prefix, bool first) {
    auto rename = [&prefix](const std::string& a) { return prefix + a; };
    Dimension half;
    half.name = name;
    half.id_attribute = rename(source.id_attribute);
    for (const auto& a : source.attributes) half.attributes.push_back(rename(a));
    for (const auto& h : source.hierarchies) {
      Hierarchy renamed;
      renamed.name = h.name;
      for (const auto& p : h.parameters) renamed.parameters.push_back(rename(p));
      for (const auto& [p, attrs] : h.weak) {
        auto& out = renamed.weak[rename(p)];
        for (const auto& w : attrs) out.push_back(rename(w));
      }
      half.hierarchies.push_back(std::move(renamed));
    }
    std::vector<std::string> columns;
    for (const auto& c : source.table.columns()) columns.push_back(rename(c));
    half.table = InstanceTable(std::move(columns));
    for (std::size_t r = 0; r < source.table.row_count(); ++r) {
      if (in_first[r] == first) half.table.append_row(source.table.row(r));
    }
    return half;
  };

  WarehouseModel out;
  out.name = model.name;
  out.facts = model.facts;
  for (const auto& d : model.dimensions) {
    if (d.name != dimension) {
      out.dimensions.push_back(d);
      continue;
    }
    out.dimensions.push_back(make_half(spec.first_name, spec.first_prefix, true));
    out.dimensions.push_back(make_half(spec.second_name, spec.second_prefix, false));
  }
  for (const auto& [fact, dims] : model.star) {
    auto& linked = out.star[fact];
    for (const auto& d : dims) {
      if (d == dimension) {
        linked.insert(spec.first_name);
        linked.insert(spec.second_name);
      } else {
        linked.insert(d);
      }
    }
  }
  return out;
}

std::vector<bool> random_halves(std::size_t rows, std::uint64_t seed) {
  Rng rng(seed);
  const auto order = rng.permutation(rows);
  std::vector<bool> in_first(rows, false);
  for (std::size_t i = 0; i < (rows + 1) / 2; ++i) in_first[order[i]] = true;
  return in_first;
}

}  // namespace dwimpute
