#include "doa/core/json_codec.hpp"

namespace doa {

Document to_json(const Value& value) {
  return std::visit([](const auto& v) { return Document(v); }, value);
}

Value value_from_json(const Document& doc) {
  if (doc.is_boolean()) return doc.get<bool>();
  if (doc.is_number_integer()) return doc.get<Int>();
  if (doc.is_number_float()) return doc.get<double>();
  if (doc.is_string()) return doc.get<std::string>();
  throw SchemaError("unsupported JSON value: " + doc.dump());
}

Value value_from_json(const Document& doc, FieldType type) {
  switch (type) {
    case FieldType::Int:
      if (doc.is_number_integer()) return doc.get<Int>();
      break;
    case FieldType::Float:
      if (doc.is_number()) return doc.get<double>();
      break;
    case FieldType::Text:
      if (doc.is_string()) return doc.get<std::string>();
      break;
    case FieldType::Bool:
      if (doc.is_boolean()) return doc.get<bool>();
      break;
  }
  throw SchemaError("expected " + std::string(to_string(type)) + ", got " + doc.dump());
}

Row row_from_document(const Schema& schema, const Document& doc) {
  Row row;
  row.reserve(schema.size());
  for (const auto& f : schema.fields()) {
    if (!doc.contains(f.name)) {
      throw SchemaError("document for '" + schema.name() + "' lacks field '" + f.name + "'");
    }
    row.push_back(value_from_json(doc.at(f.name), f.type));
  }
  return row;
}

Document record_to_document(const Schema& schema, const Record& record) {
  Document doc = Document::object();
  for (std::size_t i = 0; i < schema.size(); ++i) {
    doc[schema.fields()[i].name] = to_json(record.values.at(i));
  }
  return doc;
}

}  // namespace doa
