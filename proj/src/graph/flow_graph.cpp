#include "doa/graph/flow_graph.hpp"

#include <algorithm>
#include <set>

namespace doa {

std::string_view to_string(StreamCategory category) {
  switch (category) {
    case StreamCategory::Input: return "input";
    case StreamCategory::Internal: return "internal";
    case StreamCategory::Output: return "output";
  }
  return "?";
}

const PortView& NodeInput::operator[](std::string_view port) const {
  auto it = ports_.find(port);
  if (it == ports_.end()) {
    throw std::out_of_range("no in-port '" + std::string(port) + "'");
  }
  return it->second;
}

const PortDecl* NodeSpec::find_port(std::string_view name, PortDirection direction) const {
  const auto& ports = direction == PortDirection::In ? in_ports : out_ports;
  for (const auto& p : ports) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

void FlowGraph::add_stream(StreamDecl stream) {
  if (contains(stream.id)) {
    throw GraphError("duplicate element id '" + stream.id + "'");
  }
  if (stream.id.empty()) throw GraphError("stream id is empty");
  std::string id = stream.id;
  streams_.emplace(std::move(id), std::move(stream));
}

void FlowGraph::add_node(NodeSpec node) {
  if (contains(node.id)) {
    throw GraphError("duplicate element id '" + node.id + "'");
  }
  if (node.id.empty()) throw GraphError("node id is empty");
  for (auto* ports : {&node.in_ports, &node.out_ports}) {
    std::set<std::string> names;
    for (const auto& p : *ports) {
      if (!names.insert(p.name).second) {
        throw GraphError("node '" + node.id + "' repeats port '" + p.name + "'");
      }
    }
  }
  for (auto& p : node.in_ports) p.direction = PortDirection::In;
  for (auto& p : node.out_ports) p.direction = PortDirection::Out;
  std::string id = node.id;
  nodes_.emplace(std::move(id), std::move(node));
}

void FlowGraph::add_node(NodeSpec node, const std::map<std::string, std::string>& inputs,
                         const std::map<std::string, std::string>& outputs) {
  const std::string id = node.id;
  add_node(std::move(node));
  for (const auto& [port, stream] : inputs) wire_in(stream, id, port);
  for (const auto& [port, stream] : outputs) wire_out(id, port, stream);
}

void FlowGraph::wire_in(std::string_view stream, std::string_view node, std::string_view in_port) {
  in_edges_.push_back({std::string(stream), std::string(node), std::string(in_port)});
}

void FlowGraph::wire_out(std::string_view node, std::string_view out_port,
                         std::string_view stream) {
  out_edges_.push_back({std::string(node), std::string(out_port), std::string(stream)});
}

const StreamDecl* FlowGraph::find_stream(std::string_view id) const {
  auto it = streams_.find(std::string(id));
  return it == streams_.end() ? nullptr : &it->second;
}

const NodeSpec* FlowGraph::find_node(std::string_view id) const {
  auto it = nodes_.find(std::string(id));
  return it == nodes_.end() ? nullptr : &it->second;
}

std::optional<std::string> FlowGraph::wired_stream(std::string_view node, std::string_view port,
                                                   PortDirection direction) const {
  std::optional<std::string> found;
  int hits = 0;
  if (direction == PortDirection::In) {
    for (const auto& e : in_edges_) {
      if (e.node == node && e.port == port) {
        found = e.stream;
        ++hits;
      }
    }
  } else {
    for (const auto& e : out_edges_) {
      if (e.node == node && e.port == port) {
        found = e.stream;
        ++hits;
      }
    }
  }
  if (hits != 1) return std::nullopt;
  return found;
}

std::vector<std::string> FlowGraph::producers(std::string_view stream) const {
  std::set<std::string> out;
  for (const auto& e : out_edges_) {
    if (e.stream == stream) out.insert(e.node);
  }
  return {out.begin(), out.end()};
}

std::vector<std::string> FlowGraph::consumers(std::string_view stream) const {
  std::set<std::string> out;
  for (const auto& e : in_edges_) {
    if (e.stream == stream) out.insert(e.node);
  }
  return {out.begin(), out.end()};
}

}  // namespace doa
