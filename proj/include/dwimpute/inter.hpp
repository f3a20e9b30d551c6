#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dwimpute/fill.hpp"
#include "dwimpute/matcher.hpp"
#include "dwimpute/schema.hpp"

namespace dwimpute {

struct LinkEnd {
  std::string dimension;
  std::string hierarchy;
  std::string parameter;
  std::size_t level = 0;

  bool operator==(const LinkEnd&) const = default;
};

// A home parameter and a parameter of another dimension whose names match.
struct CrossLink {
  LinkEnd home;
  LinkEnd foreign;
  MatchDecision decision;
  // schema_fingerprint() of the model the link was discovered on.
  std::uint64_t fingerprint = 0;
};

// Shared configuration of the inter operations.
struct InterOptions {
  MatchConfig match;
  AliasMap aliases;
  DonorPolicy policy;
};

// All matched (home parameter, foreign parameter) pairs across distinct
// dimensions. Ordered by home (dimension, hierarchy, level), then foreign
// (dimension name, hierarchy, level).
std::vector<CrossLink> discover_links(const WarehouseModel& model, const MatchConfig& match,
                                      const AliasMap* aliases = nullptr);

nlohmann::json links_to_json(const std::vector<CrossLink>& links);

// Fills null home-parameter cells from the foreign dimension of `link`. Each
// foreign level below the linked foreign parameter is used only if some home
// attribute matches its name; levels are tried nearest-lower first.
// Throws StaleLinkError if the model structure changed since discovery.
FillLog impute_parameter_inter(WarehouseModel& model, const CrossLink& link, const InterOptions& options);

// Fills null cells of home weak attribute `weak` (of the link's home
// parameter) from a name-matched weak attribute of the foreign parameter.
// Returns an empty log when the foreign parameter carries no such attribute.
FillLog impute_weak_inter(WarehouseModel& model, const CrossLink& link, std::string_view weak,
                          const InterOptions& options);

// Discovers links, then for every home dimension processes parameters in
// ascending level order followed by their weak attributes. Links of one
// home parameter are tried in discovery order; the first fill wins.
FillLog run_inter(WarehouseModel& model, const InterOptions& options);

}  // namespace dwimpute
