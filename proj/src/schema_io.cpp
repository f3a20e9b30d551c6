#include "dwimpute/schema_io.hpp"

#include <fstream>
#include <initializer_list>
#include <string_view>

#include "dwimpute/errors.hpp"

namespace dwimpute {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& pointer, const std::string& message) {
  throw FormatError("schema " + (pointer.empty() ? std::string("/") : pointer) + ": " + message);
}

void require_object(const json& node, const std::string& pointer, std::initializer_list<std::string_view> allowed,
                    std::initializer_list<std::string_view> required) {
  if (!node.is_object()) fail(pointer, "expected an object");
  for (const auto& [key, value] : node.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) fail(pointer + "/" + key, "unknown field");
  }
  for (auto r : required) {
    if (!node.contains(std::string(r))) fail(pointer + "/" + std::string(r), "missing required field");
  }
}

std::string get_string(const json& node, const std::string& key, const std::string& pointer) {
  const auto& value = node.at(key);
  if (!value.is_string()) fail(pointer + "/" + key, "expected a string");
  return value.get<std::string>();
}

std::vector<std::string> get_string_list(const json& value, const std::string& pointer) {
  if (!value.is_array()) fail(pointer, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (!value[i].is_string()) fail(pointer + "/" + std::to_string(i), "expected a string");
    out.push_back(value[i].get<std::string>());
  }
  return out;
}

Hierarchy parse_hierarchy(const json& node, const std::string& pointer) {
  require_object(node, pointer, {"name", "parameters", "weak"}, {"name", "parameters"});
  Hierarchy h;
  h.name = get_string(node, "name", pointer);
  h.parameters = get_string_list(node.at("parameters"), pointer + "/parameters");
  if (node.contains("weak")) {
    const auto& weak = node.at("weak");
    if (!weak.is_object()) fail(pointer + "/weak", "expected an object mapping parameters to attribute lists");
    for (const auto& [parameter, attrs] : weak.items()) {
      h.weak[parameter] = get_string_list(attrs, pointer + "/weak/" + parameter);
    }
  }
  return h;
}

}  // namespace

WarehouseModel parse_model(const json& document, const std::filesystem::path& base_dir, const CsvOptions& csv,
                           bool load_tables) {
  require_object(document, "", {"name", "dimensions", "facts"}, {"name", "dimensions"});
  WarehouseModel model;
  model.name = get_string(document, "name", "");

  const auto& dims = document.at("dimensions");
  if (!dims.is_array()) fail("/dimensions", "expected an array");
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const std::string pointer = "/dimensions/" + std::to_string(i);
    const auto& node = dims[i];
    require_object(node, pointer, {"name", "id", "attributes", "hierarchies", "table"},
                   {"name", "id", "attributes"});
    Dimension d;
    d.name = get_string(node, "name", pointer);
    d.id_attribute = get_string(node, "id", pointer);
    d.attributes = get_string_list(node.at("attributes"), pointer + "/attributes");
    if (node.contains("hierarchies")) {
      const auto& hs = node.at("hierarchies");
      if (!hs.is_array()) fail(pointer + "/hierarchies", "expected an array");
      for (std::size_t j = 0; j < hs.size(); ++j) {
        d.hierarchies.push_back(parse_hierarchy(hs[j], pointer + "/hierarchies/" + std::to_string(j)));
      }
    }
    if (node.contains("table")) d.table_path = get_string(node, "table", pointer);

    if (load_tables) {
      if (d.table_path.empty()) fail(pointer + "/table", "missing required field");
      d.table = load_table(base_dir / d.table_path, csv);
    } else {
      d.table = InstanceTable(d.attributes);
    }
    model.dimensions.push_back(std::move(d));
  }

  if (document.contains("facts")) {
    const auto& facts = document.at("facts");
    if (!facts.is_array()) fail("/facts", "expected an array");
    for (std::size_t i = 0; i < facts.size(); ++i) {
      const std::string pointer = "/facts/" + std::to_string(i);
      require_object(facts[i], pointer, {"name", "dimensions"}, {"name"});
      FactDescriptor fact{get_string(facts[i], "name", pointer)};
      auto& linked = model.star[fact.name];
      if (facts[i].contains("dimensions")) {
        for (auto& d : get_string_list(facts[i].at("dimensions"), pointer + "/dimensions")) linked.insert(std::move(d));
      }
      model.facts.push_back(std::move(fact));
    }
  }
  return model;
}

WarehouseModel load_model(const std::filesystem::path& schema_path, const CsvOptions& csv) {
  std::ifstream in(schema_path);
  if (!in) throw IoError("cannot open schema '" + schema_path.string() + "'");
  json document;
  try {
    document = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError("schema '" + schema_path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_model(document, schema_path.parent_path(), csv, true);
}

json model_to_json(const WarehouseModel& model) {
  json document;
  document["name"] = model.name;
  document["dimensions"] = json::array();
  for (const auto& d : model.dimensions) {
    json node;
    node["name"] = d.name;
    node["id"] = d.id_attribute;
    node["attributes"] = d.attributes;
    node["hierarchies"] = json::array();
    for (const auto& h : d.hierarchies) {
      json hn;
      hn["name"] = h.name;
      hn["parameters"] = h.parameters;
      hn["weak"] = json::object();
      for (const auto& [p, attrs] : h.weak) hn["weak"][p] = attrs;
      node["hierarchies"].push_back(std::move(hn));
    }
    if (!d.table_path.empty()) node["table"] = d.table_path;
    document["dimensions"].push_back(std::move(node));
  }
  document["facts"] = json::array();
  for (const auto& f : model.facts) {
    json fn;
    fn["name"] = f.name;
    fn["dimensions"] = json::array();
    if (auto it = model.star.find(f.name); it != model.star.end()) {
      for (const auto& d : it->second) fn["dimensions"].push_back(d);
    }
    document["facts"].push_back(std::move(fn));
  }
  return document;
}

std::vector<std::filesystem::path> save_model(WarehouseModel& model, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  for (auto& d : model.dimensions) {
    d.table_path = d.name + ".csv";
    written.push_back(dir / d.table_path);
    write_table(d.table, written.back());
  }
  written.push_back(dir / "schema.json");
  std::ofstream out(written.back());
  if (!out) throw IoError("cannot write '" + written.back().string() + "'");
  out << model_to_json(model).dump(2) << '\n';
  return written;
}

}  // namespace dwimpute
