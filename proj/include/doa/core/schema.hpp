#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace doa {

using Int = std::int64_t;
using Tick = std::int64_t;

enum class FieldType { Int, Float, Text, Bool };

/// A single field value. Alternative order matches FieldType.
using Value = std::variant<Int, double, std::string, bool>;

/// Values for one record, in schema field order.
using Row = std::vector<Value>;

std::string_view to_string(FieldType type);
FieldType type_of(const Value& value);
std::string to_display(const Value& value);

struct Field {
  std::string name;
  FieldType type;

  bool operator==(const Field&) const = default;
};

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Named, ordered list of typed fields. Field order is canonical.
class Schema {
 public:
  Schema() = default;
  /// Throws SchemaError on empty field list or duplicate field names.
  Schema(std::string name, std::vector<Field> fields);

  const std::string& name() const { return name_; }
  const std::vector<Field>& fields() const { return fields_; }
  std::size_t size() const { return fields_.size(); }

  /// Index of a field; throws SchemaError when absent.
  std::size_t index_of(std::string_view field) const;
  bool has(std::string_view field) const;

  /// Empty string when the row conforms, otherwise a description of the first
  /// mismatch.
  std::string check(const Row& row) const;

  /// Canonical text, e.g. "ride(ride_id:int,x:float)". Used in fingerprints.
  std::string signature() const;

  bool operator==(const Schema& other) const {
    return name_ == other.name_ && fields_ == other.fields_;
  }

 private:
  std::string name_;
  std::vector<Field> fields_;
};

/// Immutable unit of data appended to a stream.
struct Record {
  Row values;
  Tick tick = 0;
  Int seq = 0;

  template <class T>
  const T& at(std::size_t index) const {
    return std::get<T>(values.at(index));
  }

  bool operator==(const Record&) const = default;
};

}  // namespace doa
