#include "dwimpute/schema.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

#include "dwimpute/errors.hpp"

namespace dwimpute {

std::optional<std::size_t> Hierarchy::parameter_index(std::string_view attribute) const {
  const auto it = std::find(parameters.begin(), parameters.end(), attribute);
  if (it == parameters.end()) return std::nullopt;
  return static_cast<std::size_t>(it - parameters.begin());
}

const std::vector<std::string>& Hierarchy::weak_of(std::string_view parameter) const {
  static const std::vector<std::string> kNone;
  const auto it = weak.find(std::string(parameter));
  return it == weak.end() ? kNone : it->second;
}

std::optional<std::string> Hierarchy::weak_owner(std::string_view attribute) const {
  // Scan in parameter order so the answer is stable even for malformed
  // hierarchies that attach one weak attribute to two parameters.
  for (const auto& parameter : parameters) {
    const auto& attrs = weak_of(parameter);
    if (std::find(attrs.begin(), attrs.end(), attribute) != attrs.end()) return parameter;
  }
  for (const auto& [parameter, attrs] : weak) {
    if (std::find(attrs.begin(), attrs.end(), attribute) != attrs.end()) return parameter;
  }
  return std::nullopt;
}

const Dimension* WarehouseModel::find_dimension(std::string_view dimension_name) const {
  for (const auto& d : dimensions) {
    if (d.name == dimension_name) return &d;
  }
  return nullptr;
}

Dimension* WarehouseModel::find_dimension(std::string_view dimension_name) {
  for (auto& d : dimensions) {
    if (d.name == dimension_name) return &d;
  }
  return nullptr;
}

const Dimension& WarehouseModel::dimension(std::string_view dimension_name) const {
  if (const auto* d = find_dimension(dimension_name)) return *d;
  throw UnknownAttributeError("unknown dimension '" + std::string(dimension_name) + "'");
}

Dimension& WarehouseModel::dimension(std::string_view dimension_name) {
  if (auto* d = find_dimension(dimension_name)) return *d;
  throw UnknownAttributeError("unknown dimension '" + std::string(dimension_name) + "'");
}

std::string to_string(const Violation& violation) {
  std::ostringstream out;
  out << "dimension=" << (violation.dimension.empty() ? "-" : violation.dimension)
      << " hierarchy=" << (violation.hierarchy.empty() ? "-" : violation.hierarchy)
      << " attribute=" << (violation.attribute.empty() ? "-" : violation.attribute) << ": " << violation.message;
  return out.str();
}

namespace {

void check_hierarchy(const Dimension& dim, const Hierarchy& h, const std::unordered_set<std::string>& attributes,
                     ValidationReport& report) {
  auto add = [&](std::string attribute, std::string message) {
    report.push_back({dim.name, h.name, std::move(attribute), std::move(message)});
  };

  if (h.parameters.empty()) {
    add("", "hierarchy has no parameters");
    return;
  }
  if (h.parameters.front() != dim.id_attribute) {
    add(h.parameters.front(), "first parameter must be the dimension identifier '" + dim.id_attribute + "'");
  }

  std::unordered_set<std::string> params;
  for (const auto& p : h.parameters) {
    if (!params.insert(p).second) add(p, "parameter listed more than once");
    if (!attributes.contains(p)) add(p, "parameter is not an attribute of the dimension");
  }

  std::unordered_set<std::string> weak_seen;
  for (const auto& [parameter, attrs] : h.weak) {
    if (!params.contains(parameter)) add(parameter, "weak attributes attached to a non-parameter");
    for (const auto& w : attrs) {
      if (!attributes.contains(w)) add(w, "weak attribute is not an attribute of the dimension");
      if (params.contains(w)) add(w, "attribute is both a parameter and a weak attribute of the hierarchy");
      if (!weak_seen.insert(w).second) add(w, "weak attribute attached to more than one parameter");
    }
  }
}

void check_dimension(const Dimension& dim, ValidationReport& report) {
  auto add = [&](std::string attribute, std::string message) {
    report.push_back({dim.name, "", std::move(attribute), std::move(message)});
  };

  if (dim.name.empty()) add("", "dimension name is empty");

  std::unordered_set<std::string> attributes;
  for (const auto& a : dim.attributes) {
    if (a.empty()) add(a, "attribute name is empty");
    if (!attributes.insert(a).second) add(a, "duplicate attribute");
  }
  if (!attributes.contains(dim.id_attribute)) add(dim.id_attribute, "identifier is not an attribute of the dimension");

  std::unordered_set<std::string> hierarchy_names;
  for (const auto& h : dim.hierarchies) {
    if (!hierarchy_names.insert(h.name).second) {
      report.push_back({dim.name, h.name, "", "duplicate hierarchy name"});
    }
    check_hierarchy(dim, h, attributes, report);
  }

  const auto& columns = dim.table.columns();
  const std::unordered_set<std::string> column_set(columns.begin(), columns.end());
  for (const auto& a : dim.attributes) {
    if (!column_set.contains(a)) add(a, "attribute has no column in the instance table");
  }
  for (const auto& c : columns) {
    if (!attributes.contains(c)) add(c, "table column is not a declared attribute");
  }
}

}  // namespace

ValidationReport validate_schema(const WarehouseModel& model) {
  ValidationReport report;
  std::unordered_set<std::string> names;
  for (const auto& dim : model.dimensions) {
    if (!names.insert(dim.name).second) report.push_back({dim.name, "", "", "duplicate dimension name"});
    check_dimension(dim, report);
  }

  std::unordered_set<std::string> fact_names;
  for (const auto& fact : model.facts) {
    if (fact.name.empty()) report.push_back({"", "", "", "fact name is empty"});
    if (!fact_names.insert(fact.name).second) report.push_back({"", "", "", "duplicate fact '" + fact.name + "'"});
  }
  for (const auto& [fact, dims] : model.star) {
    if (!fact_names.contains(fact)) report.push_back({"", "", "", "star mapping names undeclared fact '" + fact + "'"});
    for (const auto& d : dims) {
      if (!names.contains(d)) report.push_back({d, "", "", "fact '" + fact + "' links to an undeclared dimension"});
    }
  }
  return report;
}

void require_valid(const WarehouseModel& model) {
  const auto report = validate_schema(model);
  if (report.empty()) return;
  std::string message = "schema has " + std::to_string(report.size()) + " violation(s)";
  for (const auto& v : report) message += "\n  " + to_string(v);
  throw SchemaError(message);
}

std::vector<std::string> lower_parameters(const Hierarchy& hierarchy, std::string_view parameter) {
  const auto index = hierarchy.parameter_index(parameter);
  if (!index) {
    throw UnknownAttributeError("'" + std::string(parameter) + "' is not a parameter of hierarchy '" +
                                hierarchy.name + "'");
  }
  return {hierarchy.parameters.rbegin() + static_cast<std::ptrdiff_t>(hierarchy.parameters.size() - *index),
          hierarchy.parameters.rend()};
}

GranularityLevel level_of(const Hierarchy& hierarchy, std::string_view attribute) {
  if (auto index = hierarchy.parameter_index(attribute)) return {hierarchy.name, *index};
  if (auto owner = hierarchy.weak_owner(attribute)) {
    if (auto index = hierarchy.parameter_index(*owner)) return {hierarchy.name, *index};
  }
  throw UnknownAttributeError("'" + std::string(attribute) + "' is not in hierarchy '" + hierarchy.name + "'");
}

std::uint64_t schema_fingerprint(const WarehouseModel& model) {
  // FNV-1a over a canonical serialization of the structure.
  std::uint64_t hash = 14695981039346656037ull;
  auto feed = [&](std::string_view text) {
    for (unsigned char c : text) {
      hash ^= c;
      hash *= 1099511628211ull;
    }
    hash ^= 0xff;
    hash *= 1099511628211ull;
  };
  feed(model.name);
  for (const auto& d : model.dimensions) {
    feed("D");
    feed(d.name);
    feed(d.id_attribute);
    for (const auto& a : d.attributes) feed(a);
    for (const auto& c : d.table.columns()) feed(c);
    feed(std::to_string(d.table.row_count()));
    for (const auto& h : d.hierarchies) {
      feed("H");
      feed(h.name);
      for (const auto& p : h.parameters) feed(p);
      for (const auto& [p, attrs] : h.weak) {
        feed("W");
        feed(p);
        for (const auto& w : attrs) feed(w);
      }
    }
  }
  return hash;
}

}  // namespace dwimpute
