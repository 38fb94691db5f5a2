#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "doa/core/schema.hpp"

namespace doa {

/// What a node sees on one in-port: the full history of the wired stream and
/// the range it has not consumed yet.
struct PortView {
  const Schema* schema = nullptr;
  std::span<const Record> history;
  std::size_t delta_begin = 0;

  std::span<const Record> delta() const { return history.subspan(delta_begin); }

  template <class T>
  const T& get(const Record& record, std::string_view field) const {
    return record.at<T>(schema->index_of(field));
  }
};

/// Read-only invocation context handed to a transform.
class NodeInput {
 public:
  NodeInput(Tick tick, std::uint64_t seed) : tick_(tick), seed_(seed) {}

  void bind(std::string port, PortView view) { ports_[std::move(port)] = view; }

  /// Throws std::out_of_range for unknown ports.
  const PortView& operator[](std::string_view port) const;

  Tick tick() const { return tick_; }
  std::uint64_t seed() const { return seed_; }

 private:
  Tick tick_;
  std::uint64_t seed_;
  std::map<std::string, PortView, std::less<>> ports_;
};

/// New rows per out-port name.
using NodeOutput = std::map<std::string, std::vector<Row>>;

/// Must be a pure function of its input: no captured mutable state.
using Transform = std::function<NodeOutput(const NodeInput&)>;

}  // namespace doa
