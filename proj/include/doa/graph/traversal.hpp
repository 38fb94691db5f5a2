#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "doa/graph/flow_graph.hpp"

namespace doa {

/// Kahn's algorithm over node-to-node dependencies; ready nodes are taken in
/// ascending id order. Throws GraphError when the graph does not validate.
std::vector<std::string> topological_order(const FlowGraph& graph);

/// Every stream and node from which `target` is reachable, including itself.
/// Throws GraphError for unknown ids.
std::set<std::string> upstream_closure(const FlowGraph& graph, std::string_view target);

/// Every stream and node reachable from `source`, including itself.
std::set<std::string> downstream_closure(const FlowGraph& graph, std::string_view source);

/// Graphviz rendering: nodes as ellipses, streams as filled boxes colored by
/// category (red input, yellow internal, green output). Output is sorted and
/// therefore byte-stable.
std::string export_dot(const FlowGraph& graph);

}  // namespace doa
