#include <fstream>
#include <sstream>

#include "doa/collection/collection.hpp"
#include "doa/core/json_codec.hpp"

namespace doa {

namespace {

Document map_to_json(const std::map<std::string, Value>& values) {
  Document doc = Document::object();
  for (const auto& [k, v] : values) doc[k] = to_json(v);
  return doc;
}

std::map<std::string, Value> map_from_json(const Document& doc) {
  if (!doc.is_object()) throw CollectionError("expected an object, got " + doc.dump());
  std::map<std::string, Value> out;
  for (const auto& [k, v] : doc.items()) out[k] = value_from_json(v);
  return out;
}

}  // namespace

std::string dataset_line(const DatasetRow& row) {
  Document doc = {{"features", map_to_json(row.features)},
                  {"key", to_json(row.key)},
                  {"label", map_to_json(row.label)}};
  return doc.dump();
}

DatasetRow parse_dataset_line(std::string_view line) {
  Document doc = Document::parse(line.begin(), line.end(), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw CollectionError("not a JSON object");
  }
  if (doc.size() != 3 || !doc.contains("key") || !doc.contains("features") ||
      !doc.contains("label")) {
    throw CollectionError("row must have exactly the keys features, key, label");
  }
  try {
    return DatasetRow{value_from_json(doc.at("key")), map_from_json(doc.at("features")),
                      map_from_json(doc.at("label"))};
  } catch (const SchemaError& e) {
    throw CollectionError(e.what());
  }
}

std::size_t write_dataset(const std::vector<DatasetRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CollectionError("cannot open " + path.string() + " for writing");
  for (const auto& row : rows) out << dataset_line(row) << '\n';
  out.flush();
  if (!out) throw CollectionError("write to " + path.string() + " failed");
  return rows.size();
}

std::vector<DatasetRow> read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CollectionError("cannot open " + path.string());
  std::vector<DatasetRow> rows;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    try {
      rows.push_back(parse_dataset_line(line));
    } catch (const CollectionError& e) {
      throw CollectionError(path.string() + ":" + std::to_string(number) + ": " + e.what());
    }
  }
  return rows;
}

}  // namespace doa
