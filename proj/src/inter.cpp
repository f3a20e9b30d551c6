#include "dwimpute/inter.hpp"

#include <algorithm>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <tuple>

#include "donor_index.hpp"
#include "dwimpute/errors.hpp"

namespace dwimpute {

namespace {

const Hierarchy& hierarchy_of(const Dimension& dimension, std::string_view name) {
  for (const auto& h : dimension.hierarchies) {
    if (h.name == name) return h;
  }
  throw StaleLinkError("dimension '" + dimension.name + "' has no hierarchy '" + std::string(name) + "'");
}

void check_fresh(const WarehouseModel& model, const CrossLink& link) {
  if (schema_fingerprint(model) != link.fingerprint) {
    throw StaleLinkError("link " + link.home.dimension + "." + link.home.parameter + " ~ " + link.foreign.dimension +
                         "." + link.foreign.parameter + " was discovered on a different model");
  }
}

// A foreign matching level paired with the home attribute compared against it.
struct ScanLevel {
  std::string foreign_attribute;
  std::string home_attribute;
};

FillLog fill_from_foreign(Dimension& home, const Dimension& foreign, const std::string& hierarchy_name,
                          std::string_view home_target, std::string_view foreign_target,
                          const std::vector<ScanLevel>& levels, DonorPolicy policy) {
  auto& table = home.table;
  const auto target_column = table.column_index(home_target);
  const auto foreign_target_column = foreign.table.column_index(foreign_target);

  std::vector<std::size_t> home_columns;
  std::vector<std::size_t> foreign_columns;
  for (const auto& level : levels) {
    home_columns.push_back(table.column_index(level.home_attribute));
    foreign_columns.push_back(foreign.table.column_index(level.foreign_attribute));
  }
  std::vector<std::unique_ptr<detail::DonorIndex>> indices(levels.size());

  FillLog log;
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    if (table.at(r, target_column)) continue;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      const auto& key = table.at(r, home_columns[i]);
      if (!key) continue;
      if (!indices[i]) {
        indices[i] =
            std::make_unique<detail::DonorIndex>(foreign.table, foreign_columns[i], foreign_target_column, policy);
      }
      const auto donor = indices[i]->choose(*key);
      if (!donor) continue;
      const std::string value = *foreign.table.at(*donor, foreign_target_column);
      table.at(r, target_column) = value;
      log.push_back({{home.name, r, std::string(home_target)},
                     hierarchy_name,
                     value,
                     foreign.name,
                     *donor,
                     levels[i].foreign_attribute,
                     FillSource::kInter});
      break;
    }
  }
  return log;
}

// Home attribute to compare with a foreign level, if any attribute matches.
std::optional<std::string> home_counterpart(const Dimension& home, const Dimension& foreign,
                                            const std::string& foreign_attribute, const InterOptions& options) {
  auto match = best_match(foreign_attribute, foreign.name, home.attributes, home.name, options.match,
                          options.aliases.empty() ? nullptr : &options.aliases);
  if (!match) return std::nullopt;
  return match->attribute;
}

}  // namespace

std::vector<CrossLink> discover_links(const WarehouseModel& model, const MatchConfig& match, const AliasMap* aliases) {
  const auto fingerprint = schema_fingerprint(model);

  std::vector<std::size_t> by_name(model.dimensions.size());
  std::iota(by_name.begin(), by_name.end(), 0);
  std::stable_sort(by_name.begin(), by_name.end(), [&](std::size_t a, std::size_t b) {
    return model.dimensions[a].name < model.dimensions[b].name;
  });

  std::vector<CrossLink> links;
  std::set<std::tuple<std::string, std::string, std::string, std::string, std::string, std::string>> seen;
  for (const auto& home : model.dimensions) {
    for (const auto& h : home.hierarchies) {
      for (std::size_t i = 0; i < h.parameters.size(); ++i) {
        for (const auto f : by_name) {
          const auto& foreign = model.dimensions[f];
          if (foreign.name == home.name) continue;
          for (const auto& h2 : foreign.hierarchies) {
            for (std::size_t j = 0; j < h2.parameters.size(); ++j) {
              auto decision = attributes_match(h.parameters[i], home.name, h2.parameters[j], foreign.name, match, aliases);
              if (!decision.matched) continue;
              if (!seen.emplace(home.name, h.name, h.parameters[i], foreign.name, h2.name, h2.parameters[j]).second) {
                continue;
              }
              links.push_back({{home.name, h.name, h.parameters[i], i},
                               {foreign.name, h2.name, h2.parameters[j], j},
                               std::move(decision),
                               fingerprint});
            }
          }
        }
      }
    }
  }
  return links;
}

nlohmann::json links_to_json(const std::vector<CrossLink>& links) {
  auto end_to_json = [](const LinkEnd& end) {
    return nlohmann::json{{"dimension", end.dimension},
                          {"hierarchy", end.hierarchy},
                          {"parameter", end.parameter},
                          {"level", end.level}};
  };
  auto out = nlohmann::json::array();
  for (const auto& link : links) {
    out.push_back({{"home", end_to_json(link.home)},
                   {"foreign", end_to_json(link.foreign)},
                   {"score", link.decision.score}});
  }
  return out;
}

FillLog impute_parameter_inter(WarehouseModel& model, const CrossLink& link, const InterOptions& options) {
  check_fresh(model, link);
  auto& home = model.dimension(link.home.dimension);
  const auto& foreign = model.dimension(link.foreign.dimension);
  const auto& home_h = hierarchy_of(home, link.home.hierarchy);
  const auto& foreign_h = hierarchy_of(foreign, link.foreign.hierarchy);
  const auto home_index = home_h.parameter_index(link.home.parameter);
  if (!home_index) throw StaleLinkError("home parameter '" + link.home.parameter + "' no longer exists");
  if (*home_index == 0) {
    throw SchemaError("cannot impute identifier '" + link.home.parameter + "' of dimension '" + home.name + "'");
  }

  std::vector<ScanLevel> levels;
  for (auto& lower : lower_parameters(foreign_h, link.foreign.parameter)) {
    if (auto counterpart = home_counterpart(home, foreign, lower, options)) {
      levels.push_back({std::move(lower), std::move(*counterpart)});
    }
  }
  return fill_from_foreign(home, foreign, home_h.name, link.home.parameter, link.foreign.parameter, levels,
                           options.policy);
}

FillLog impute_weak_inter(WarehouseModel& model, const CrossLink& link, std::string_view weak,
                          const InterOptions& options) {
  check_fresh(model, link);
  auto& home = model.dimension(link.home.dimension);
  const auto& foreign = model.dimension(link.foreign.dimension);
  const auto& home_h = hierarchy_of(home, link.home.hierarchy);
  const auto& foreign_h = hierarchy_of(foreign, link.foreign.hierarchy);

  const auto& home_weak = home_h.weak_of(link.home.parameter);
  if (std::find(home_weak.begin(), home_weak.end(), weak) == home_weak.end()) {
    throw UnknownAttributeError("'" + std::string(weak) + "' is not a weak attribute of '" + link.home.parameter +
                                "' in hierarchy '" + home_h.name + "'");
  }
  const auto foreign_weak = best_match(weak, home.name, foreign_h.weak_of(link.foreign.parameter), foreign.name,
                                       options.match, options.aliases.empty() ? nullptr : &options.aliases);
  if (!foreign_weak) return {};

  std::vector<ScanLevel> levels{{link.foreign.parameter, link.home.parameter}};
  for (auto& lower : lower_parameters(foreign_h, link.foreign.parameter)) {
    if (auto counterpart = home_counterpart(home, foreign, lower, options)) {
      levels.push_back({std::move(lower), std::move(*counterpart)});
    }
  }
  return fill_from_foreign(home, foreign, home_h.name, weak, foreign_weak->attribute, levels, options.policy);
}

FillLog run_inter(WarehouseModel& model, const InterOptions& options) {
  require_valid(model);
  options.match.check();
  const auto links = discover_links(model, options.match, options.aliases.empty() ? nullptr : &options.aliases);

  FillLog log;
  // Links of one attribute fill disjoint rows; the merged segment is kept in
  // row order.
  auto append = [&log](std::size_t from, FillLog part) {
    append_log(log, std::move(part));
    std::stable_sort(log.begin() + static_cast<std::ptrdiff_t>(from), log.end(),
                     [](const FillRecord& a, const FillRecord& b) { return a.target.row < b.target.row; });
  };
  for (const auto& home : model.dimensions) {
    for (const auto& h : home.hierarchies) {
      for (std::size_t i = 0; i < h.parameters.size(); ++i) {
        std::vector<const CrossLink*> mine;
        for (const auto& link : links) {
          if (link.home.dimension == home.name && link.home.hierarchy == h.name && link.home.level == i) {
            mine.push_back(&link);
          }
        }
        if (i > 0) {
          const auto from = log.size();
          for (const auto* link : mine) append(from, impute_parameter_inter(model, *link, options));
        }
        for (const auto& weak : h.weak_of(h.parameters[i])) {
          const auto from = log.size();
          for (const auto* link : mine) append(from, impute_weak_inter(model, *link, weak, options));
        }
      }
    }
  }
  return log;
}

}  // namespace dwimpute
