#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "dwimpute/schema.hpp"
#include "dwimpute/table.hpp"

namespace dwimpute {

// Builds a model from a schema document. Table paths are resolved against
// `base_dir`; when `load_tables` is false every dimension gets an empty table
// whose columns are the declared attributes.
//
// Unknown or mistyped fields raise FormatError naming the JSON pointer of the
// offending value, e.g. "/dimensions/0/hierarchies/1/weak".
WarehouseModel parse_model(const nlohmann::json& document, const std::filesystem::path& base_dir,
                           const CsvOptions& csv = {}, bool load_tables = true);

// Reads the schema file and every table it references.
WarehouseModel load_model(const std::filesystem::path& schema_path, const CsvOptions& csv = {});

nlohmann::json model_to_json(const WarehouseModel& model);

// Writes schema.json plus one <dimension>.csv per dimension into `dir`, and
// points each dimension's table_path at its new file. Returns the written paths.
std::vector<std::filesystem::path> save_model(WarehouseModel& model, const std::filesystem::path& dir);

}  // namespace dwimpute
