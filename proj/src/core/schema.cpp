#include "doa/core/schema.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

namespace doa {

std::string_view to_string(FieldType type) {
  switch (type) {
    case FieldType::Int: return "int";
    case FieldType::Float: return "float";
    case FieldType::Text: return "text";
    case FieldType::Bool: return "bool";
  }
  return "?";
}

FieldType type_of(const Value& value) {
  return static_cast<FieldType>(value.index());
}

std::string to_display(const Value& value) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return nlohmann::json(v).dump();
        }
      },
      value);
}

Schema::Schema(std::string name, std::vector<Field> fields)
    : name_(std::move(name)), fields_(std::move(fields)) {
  if (fields_.empty()) {
    throw SchemaError("schema '" + name_ + "' has no fields");
  }
  std::unordered_set<std::string> seen;
  for (const auto& f : fields_) {
    if (f.name.empty()) {
      throw SchemaError("schema '" + name_ + "' has an unnamed field");
    }
    if (!seen.insert(f.name).second) {
      throw SchemaError("schema '" + name_ + "' repeats field '" + f.name + "'");
    }
  }
}

std::size_t Schema::index_of(std::string_view field) const {
  for (std::size_t i = 0; i < fields_.size(); ++i) {
    if (fields_[i].name == field) return i;
  }
  throw SchemaError("schema '" + name_ + "' has no field '" + std::string(field) + "'");
}

bool Schema::has(std::string_view field) const {
  return std::any_of(fields_.begin(), fields_.end(),
                     [&](const Field& f) { return f.name == field; });
}

std::string Schema::check(const Row& row) const {
  if (row.size() != fields_.size()) {
    return "expected " + std::to_string(fields_.size()) + " values for '" + name_ +
           "', got " + std::to_string(row.size());
  }
  for (std::size_t i = 0; i < fields_.size(); ++i) {
    if (type_of(row[i]) != fields_[i].type) {
      return "field '" + fields_[i].name + "' expects " +
             std::string(to_string(fields_[i].type)) + ", got " +
             std::string(to_string(type_of(row[i])));
    }
  }
  return {};
}

std::string Schema::signature() const {
  std::ostringstream out;
  out << name_ << '(';
  for (std::size_t i = 0; i < fields_.size(); ++i) {
    if (i) out << ',';
    out << fields_[i].name << ':' << to_string(fields_[i].type);
  }
  out << ')';
  return out.str();
}

}  // namespace doa
