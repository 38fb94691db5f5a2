#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "doa/graph/flow_graph.hpp"

namespace doa {

class RuntimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Tick ticks = 1;
  std::uint64_t seed = 0;
};

struct TickSummary {
  Tick tick = 0;
  /// Records appended by nodes during the tick, for every non-input stream.
  std::map<std::string, std::size_t> produced;
};

/// Executes a validated FlowGraph tick by tick. Owns every stream log and the
/// per-(node, in-port) read cursors, so node transforms stay stateless.
class RuntimeInstance {
 public:
  /// Throws RuntimeError naming the first violation when the graph is invalid.
  static RuntimeInstance start(std::shared_ptr<const FlowGraph> graph, std::uint64_t seed = 0);
  static RuntimeInstance start(FlowGraph graph, std::uint64_t seed = 0);

  /// Appends to an Input stream at the current tick and returns the record.
  Record inject(std::string_view stream, Row values);

  /// Runs every node once in topological order, then advances the tick.
  TickSummary step();

  /// Copy of records [from_seq, len). Never mutates.
  std::vector<Record> read(std::string_view stream, std::size_t from_seq = 0) const;
  std::span<const Record> log(std::string_view stream) const;

  Tick tick() const { return tick_; }
  std::uint64_t seed() const { return seed_; }
  const FlowGraph& graph() const { return *graph_; }
  const std::vector<std::string>& order() const { return order_; }
  std::size_t cursor(std::string_view node, std::string_view in_port) const;
  std::uint64_t invocations(std::string_view node) const;

  /// Canonical JSON text of every stream log (sorted by stream id).
  std::string dump() const;

 private:
  struct PortBinding {
    std::string port;
    std::string stream;
  };
  struct NodeState {
    const NodeSpec* spec = nullptr;
    std::vector<PortBinding> inputs;
    std::vector<PortBinding> outputs;
    std::vector<std::size_t> cursors;
    std::uint64_t invocations = 0;
  };

  RuntimeInstance() = default;
  std::vector<Record>& mutable_log(std::string_view stream);
  void run_node(NodeState& state, TickSummary& summary);

  std::shared_ptr<const FlowGraph> graph_;
  std::uint64_t seed_ = 0;
  Tick tick_ = 0;
  bool failed_ = false;
  std::vector<std::string> order_;
  std::map<std::string, std::vector<Record>, std::less<>> logs_;
  std::map<std::string, NodeState, std::less<>> nodes_;
};

}  // namespace doa
