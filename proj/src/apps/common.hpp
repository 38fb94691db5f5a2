#pragma once

#include <string>
#include <utility>
#include <vector>

#include "doa/apps/app.hpp"

namespace doa::apps::detail {

inline PortDecl in_port(std::string name, const Schema& schema) {
  return {std::move(name), PortDirection::In, schema};
}

inline PortDecl out_port(std::string name, const Schema& schema) {
  return {std::move(name), PortDirection::Out, schema};
}

inline soa::Signature sig(std::set<std::string> inputs, std::set<std::string> outputs) {
  return {std::move(inputs), std::move(outputs)};
}

inline Document empty() { return Document::object(); }

inline std::string key_of(Int id) { return std::to_string(id); }

/// Zero-padded insertion counter, so table scans follow insertion order.
inline std::string seq_key(std::size_t n) {
  std::string s = std::to_string(n);
  return std::string(s.size() < 12 ? 12 - s.size() : 0, '0') + s;
}

template <class T>
T field(const Document& doc, const char* name) {
  return doc.at(name).get<T>();
}

inline Document with_tick(Document doc, Tick tick) {
  doc["tick"] = tick;
  return doc;
}

inline DatasetRow row_from_export(const Document& doc) {
  return parse_dataset_line(doc.dump());
}

}  // namespace doa::apps::detail
