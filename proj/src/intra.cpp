#include "dwimpute/intra.hpp"

#include <algorithm>
#include <memory>
#include <vector>

#include "donor_index.hpp"
#include "dwimpute/errors.hpp"

namespace dwimpute {

namespace {

// Shared loop of both intra operations: `levels` are the matching
// attributes in scan order, `target` the column being completed.
FillLog fill_column(Dimension& dimension, const Hierarchy& hierarchy, std::string_view target,
                    const std::vector<std::string>& levels, DonorPolicy policy) {
  auto& table = dimension.table;
  const auto target_column = table.column_index(target);

  std::vector<std::size_t> level_columns;
  for (const auto& level : levels) level_columns.push_back(table.column_index(level));

  // Index construction is deferred until the column has a null to fill.
  std::vector<std::unique_ptr<detail::DonorIndex>> indices(levels.size());
  auto index_for = [&](std::size_t i) -> detail::DonorIndex& {
    if (!indices[i]) indices[i] = std::make_unique<detail::DonorIndex>(table, level_columns[i], target_column, policy);
    return *indices[i];
  };

  std::size_t nulls = 0;
  for (std::size_t r = 0; r < table.row_count(); ++r) nulls += !table.at(r, target_column);
  FillLog log;
  if (nulls == 0) return log;
  log.reserve(nulls);
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    if (table.at(r, target_column)) continue;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      const auto& key = table.at(r, level_columns[i]);
      if (!key) continue;
      const auto donor = index_for(i).choose(*key);
      if (!donor) continue;

      const std::string value = *table.at(*donor, target_column);
      table.at(r, target_column) = value;
      log.push_back({{dimension.name, r, std::string(target)},
                     hierarchy.name,
                     value,
                     dimension.name,
                     *donor,
                     levels[i],
                     FillSource::kIntra});
      for (std::size_t j = 0; j < levels.size(); ++j) {
        if (indices[j]) indices[j]->add(r);
      }
      break;
    }
  }
  return log;
}

}  // namespace

FillLog impute_parameter_intra(Dimension& dimension, const Hierarchy& hierarchy, std::string_view parameter,
                               DonorPolicy policy) {
  const auto index = hierarchy.parameter_index(parameter);
  if (!index) {
    throw UnknownAttributeError("'" + std::string(parameter) + "' is not a parameter of hierarchy '" +
                                hierarchy.name + "'");
  }
  if (*index == 0) {
    throw SchemaError("cannot impute identifier '" + std::string(parameter) + "' of dimension '" + dimension.name +
                      "'");
  }
  return fill_column(dimension, hierarchy, parameter, lower_parameters(hierarchy, parameter), policy);
}

FillLog impute_weak_intra(Dimension& dimension, const Hierarchy& hierarchy, std::string_view parameter,
                          std::string_view weak, DonorPolicy policy) {
  const auto& attrs = hierarchy.weak_of(parameter);
  if (!hierarchy.has_parameter(parameter) || std::find(attrs.begin(), attrs.end(), weak) == attrs.end()) {
    throw UnknownAttributeError("'" + std::string(weak) + "' is not a weak attribute of '" + std::string(parameter) +
                                "' in hierarchy '" + hierarchy.name + "'");
  }
  std::vector<std::string> levels{std::string(parameter)};
  for (auto& lower : lower_parameters(hierarchy, parameter)) levels.push_back(std::move(lower));
  return fill_column(dimension, hierarchy, weak, levels, policy);
}

FillLog run_intra(WarehouseModel& model, DonorPolicy policy) {
  require_valid(model);
  FillLog log;
  auto append = [&log](FillLog part) { append_log(log, std::move(part)); };
  for (auto& dimension : model.dimensions) {
    for (const auto& hierarchy : dimension.hierarchies) {
      for (std::size_t i = 0; i < hierarchy.parameters.size(); ++i) {
        const auto& parameter = hierarchy.parameters[i];
        if (i > 0) append(impute_parameter_intra(dimension, hierarchy, parameter, policy));
        for (const auto& weak : hierarchy.weak_of(parameter)) {
          append(impute_weak_intra(dimension, hierarchy, parameter, weak, policy));
        }
      }
    }
  }
  return log;
}

}  // namespace dwimpute
