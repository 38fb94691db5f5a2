#include <algorithm>
#include <map>
#include <sstream>

#include "doa/graph/traversal.hpp"

namespace doa {

namespace {

std::string quoted(std::string_view id) {
  std::string out = "\"";
  for (char c : id) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

std::string_view color(StreamCategory category) {
  switch (category) {
    case StreamCategory::Input: return "red";
    case StreamCategory::Internal: return "yellow";
    case StreamCategory::Output: return "green";
  }
  return "gray";
}

}  // namespace

std::string export_dot(const FlowGraph& graph) {
  // Streams and nodes share one id space, so a single sorted map orders both.
  std::map<std::string, std::string> vertices;
  for (const auto& [id, stream] : graph.streams()) {
    vertices[id] = quoted(id) + " [shape=box, style=filled, color=" +
                   std::string(color(stream.category)) + "];";
  }
  for (const auto& [id, node] : graph.nodes()) {
    vertices[id] = quoted(id) + " [shape=ellipse];";
  }
  std::vector<std::string> edges;
  for (const auto& e : graph.in_edges()) {
    edges.push_back(quoted(e.stream) + " -> " + quoted(e.node) + " [label=" + quoted(e.port) + "];");
  }
  for (const auto& e : graph.out_edges()) {
    edges.push_back(quoted(e.node) + " -> " + quoted(e.stream) + " [label=" + quoted(e.port) + "];");
  }
  std::sort(edges.begin(), edges.end());

  std::ostringstream out;
  out << "digraph flow {\n";
  for (const auto& [id, stmt] : vertices) out << "  " << stmt << '\n';
  for (const auto& stmt : edges) out << "  " << stmt << '\n';
  out << "}\n";
  return out.str();
}

}  // namespace doa
