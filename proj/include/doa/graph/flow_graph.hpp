#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "doa/core/schema.hpp"
#include "doa/graph/node.hpp"

namespace doa {

enum class StreamCategory { Input, Internal, Output };
enum class PortDirection { In, Out };

std::string_view to_string(StreamCategory category);

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StreamDecl {
  std::string id;
  StreamCategory category = StreamCategory::Internal;
  Schema schema;
};

struct PortDecl {
  std::string name;
  PortDirection direction = PortDirection::In;
  Schema schema;
};

struct NodeSpec {
  std::string id;
  std::vector<PortDecl> in_ports;
  std::vector<PortDecl> out_ports;
  Transform transform;
  std::string logic_version;

  const PortDecl* find_port(std::string_view name, PortDirection direction) const;
};

/// stream -> node.in_port
struct InEdge {
  std::string stream;
  std::string node;
  std::string port;
  bool operator==(const InEdge&) const = default;
};

/// node.out_port -> stream
struct OutEdge {
  std::string node;
  std::string port;
  std::string stream;
  bool operator==(const OutEdge&) const = default;
};

/// Bipartite wiring of stateless nodes and streams. Edges are stored as given;
/// validate() decides whether the result is well formed.
class FlowGraph {
 public:
  /// Throws GraphError when the id is already used by a stream or a node.
  void add_stream(StreamDecl stream);
  /// Throws GraphError on id collisions or repeated port names.
  void add_node(NodeSpec node);

  void wire_in(std::string_view stream, std::string_view node, std::string_view in_port);
  void wire_out(std::string_view node, std::string_view out_port, std::string_view stream);

  /// Adds a node and wires each port to the stream with the same name given in
  /// `inputs` / `outputs` (port name -> stream id).
  void add_node(NodeSpec node, const std::map<std::string, std::string>& inputs,
                const std::map<std::string, std::string>& outputs);

  const std::map<std::string, StreamDecl>& streams() const { return streams_; }
  const std::map<std::string, NodeSpec>& nodes() const { return nodes_; }
  const std::vector<InEdge>& in_edges() const { return in_edges_; }
  const std::vector<OutEdge>& out_edges() const { return out_edges_; }

  const StreamDecl* find_stream(std::string_view id) const;
  const NodeSpec* find_node(std::string_view id) const;
  bool contains(std::string_view id) const { return find_stream(id) || find_node(id); }

  /// Stream wired to a port, if exactly one edge exists.
  std::optional<std::string> wired_stream(std::string_view node, std::string_view port,
                                          PortDirection direction) const;

  /// Nodes producing into / consuming from a stream, sorted by id.
  std::vector<std::string> producers(std::string_view stream) const;
  std::vector<std::string> consumers(std::string_view stream) const;

 private:
  std::map<std::string, StreamDecl> streams_;
  std::map<std::string, NodeSpec> nodes_;
  std::vector<InEdge> in_edges_;
  std::vector<OutEdge> out_edges_;
};

}  // namespace doa
