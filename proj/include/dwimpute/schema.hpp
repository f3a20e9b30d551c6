#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dwimpute/table.hpp"

namespace dwimpute {

// An ordered chain of parameters, finest granularity first. parameters[0] is
// the owning dimension's identifier; parameters[i] rolls up to parameters[j]
// for every i < j. Each parameter may carry weak attributes.
struct Hierarchy {
  std::string name;
  std::vector<std::string> parameters;
  std::map<std::string, std::vector<std::string>> weak;

  std::optional<std::size_t> parameter_index(std::string_view attribute) const;
  bool has_parameter(std::string_view attribute) const { return parameter_index(attribute).has_value(); }

  // Weak attributes of `parameter` in declaration order; empty if none.
  const std::vector<std::string>& weak_of(std::string_view parameter) const;

  // The parameter that `attribute` is a weak attribute of, if any.
  std::optional<std::string> weak_owner(std::string_view attribute) const;
};

struct Dimension {
  std::string name;
  std::vector<std::string> attributes;
  std::string id_attribute;
  std::vector<Hierarchy> hierarchies;
  InstanceTable table;
  // Where the table was read from, relative to the schema file. Empty for
  // in-memory models.
  std::string table_path;
};

struct FactDescriptor {
  std::string name;
};

struct WarehouseModel {
  std::string name;
  std::vector<Dimension> dimensions;
  std::vector<FactDescriptor> facts;
  std::map<std::string, std::set<std::string>> star;

  const Dimension* find_dimension(std::string_view name) const;
  Dimension* find_dimension(std::string_view name);
  // Throws UnknownAttributeError.
  const Dimension& dimension(std::string_view name) const;
  Dimension& dimension(std::string_view name);
};

struct GranularityLevel {
  std::string hierarchy;
  std::size_t index = 0;

  bool operator==(const GranularityLevel&) const = default;
};

struct Violation {
  std::string dimension;
  std::string hierarchy;
  std::string attribute;
  std::string message;

  bool operator==(const Violation&) const = default;
};

std::string to_string(const Violation& violation);

using ValidationReport = std::vector<Violation>;

// Every invariant violation of the model, empty when the model is well formed.
ValidationReport validate_schema(const WarehouseModel& model);

// Throws SchemaError listing the violations when the model is not valid.
void require_valid(const WarehouseModel& model);

// Parameters strictly below `parameter`, nearest-lower first, ending with the
// identifier. Throws UnknownAttributeError.
std::vector<std::string> lower_parameters(const Hierarchy& hierarchy, std::string_view parameter);

// Position of a parameter, or of a weak attribute's parameter. Throws UnknownAttributeError.
GranularityLevel level_of(const Hierarchy& hierarchy, std::string_view attribute);

// Digest of the model's structure (names, attributes, hierarchies, row
// counts). Cell values are excluded, so imputation does not change it.
std::uint64_t schema_fingerprint(const WarehouseModel& model);

}  // namespace dwimpute
