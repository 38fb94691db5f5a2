#pragma once

#include "json.hpp"

#include "doa/core/schema.hpp"

namespace doa {

/// Documents exchanged by services and events. Object keys are kept sorted,
/// so dump() is canonical.
using Document = nlohmann::json;

Document to_json(const Value& value);
/// Throws SchemaError for null, arrays, objects.
Value value_from_json(const Document& doc);
/// Converts a document field to the given type (ints are accepted for floats).
Value value_from_json(const Document& doc, FieldType type);

/// Builds a row from an object document using the schema's field order.
Row row_from_document(const Schema& schema, const Document& doc);
Document record_to_document(const Schema& schema, const Record& record);

}  // namespace doa
