#include "doa/graph/traversal.hpp"

#include <deque>
#include <map>

#include "doa/graph/validate.hpp"

namespace doa {

std::vector<std::string> topological_order(const FlowGraph& graph) {
  if (auto report = validate(graph); !report.ok()) {
    throw GraphError("cannot order an invalid graph: " + report.violations.front().message);
  }
  std::map<std::string, std::set<std::string>> successors;
  std::map<std::string, int> indegree;
  for (const auto& [id, node] : graph.nodes()) indegree[id] = 0;
  for (const auto& out : graph.out_edges()) {
    for (const auto& in : graph.in_edges()) {
      if (in.stream == out.stream && successors[out.node].insert(in.node).second) {
        ++indegree[in.node];
      }
    }
  }
  std::set<std::string> ready;
  for (const auto& [id, deg] : indegree) {
    if (deg == 0) ready.insert(id);
  }
  std::vector<std::string> order;
  while (!ready.empty()) {
    std::string next = *ready.begin();
    ready.erase(ready.begin());
    for (const auto& s : successors[next]) {
      if (--indegree[s] == 0) ready.insert(s);
    }
    order.push_back(std::move(next));
  }
  return order;
}

namespace {

enum class Direction { Up, Down };

std::set<std::string> closure(const FlowGraph& graph, std::string_view start, Direction dir) {
  if (!graph.contains(start)) {
    throw GraphError("unknown element '" + std::string(start) + "'");
  }
  std::set<std::string> seen{std::string(start)};
  std::deque<std::string> queue{std::string(start)};
  while (!queue.empty()) {
    const std::string cur = queue.front();
    queue.pop_front();
    // Up: stream <- producing node (out edge), node <- stream (in edge).
    // Down: the mirror image.
    for (const auto& e : graph.in_edges()) {
      const std::string& from = dir == Direction::Up ? e.node : e.stream;
      const std::string& to = dir == Direction::Up ? e.stream : e.node;
      if (from == cur && seen.insert(to).second) queue.push_back(to);
    }
    for (const auto& e : graph.out_edges()) {
      const std::string& from = dir == Direction::Up ? e.stream : e.node;
      const std::string& to = dir == Direction::Up ? e.node : e.stream;
      if (from == cur && seen.insert(to).second) queue.push_back(to);
    }
  }
  return seen;
}

}  // namespace

std::set<std::string> upstream_closure(const FlowGraph& graph, std::string_view target) {
  return closure(graph, target, Direction::Up);
}

std::set<std::string> downstream_closure(const FlowGraph& graph, std::string_view source) {
  return closure(graph, source, Direction::Down);
}

}  // namespace doa
