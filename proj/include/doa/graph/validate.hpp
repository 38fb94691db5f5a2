#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "doa/graph/flow_graph.hpp"

namespace doa {

enum class ViolationKind {
  UnknownReference,
  UnwiredPort,
  MultiplyWiredPort,
  SchemaMismatch,
  InputHasProducer,
  OutputHasConsumer,
  InternalProducerCount,
  InternalWithoutConsumer,
  Cycle,
  Orphan,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  /// Offending element ids (a cycle lists every member, sorted).
  std::vector<std::string> subjects;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::size_t count(ViolationKind kind) const;
  std::string summary() const;
};

/// Checks every wiring, category, acyclicity and connectivity rule. Never
/// throws; an empty report means the graph can be executed.
ValidationReport validate(const FlowGraph& graph);

}  // namespace doa
