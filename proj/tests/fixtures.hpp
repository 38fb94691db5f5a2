#pragma once

#include <map>
#include <string>
#include <vector>

#include "doa/core/rng.hpp"
#include "doa/graph/flow_graph.hpp"

namespace doa::testing {

inline const Schema kX("x", {{"x", FieldType::Int}});

/// Transform copying every delta record of every in-port to every out-port.
inline NodeOutput copy_all(const NodeSpec& spec, const NodeInput& in) {
  NodeOutput out;
  for (const auto& ip : spec.in_ports) {
    for (const Record& r : in[ip.name].delta()) {
      for (const auto& op : spec.out_ports) out[op.name].push_back(r.values);
    }
  }
  return out;
}

/// Small graph builder over the single-field schema kX. Ports are named
/// "in0", "in1", ... and "out0", "out1", ... in wiring order.
class GraphBuilder {
 public:
  GraphBuilder& input(const std::string& id) { return stream(id, StreamCategory::Input); }
  GraphBuilder& internal(const std::string& id) { return stream(id, StreamCategory::Internal); }
  GraphBuilder& output(const std::string& id) { return stream(id, StreamCategory::Output); }

  GraphBuilder& stream(const std::string& id, StreamCategory c) {
    graph.add_stream({id, c, kX});
    return *this;
  }

  GraphBuilder& node(const std::string& id, const std::vector<std::string>& ins,
                     const std::vector<std::string>& outs) {
    NodeSpec spec;
    spec.id = id;
    spec.logic_version = "1";
    std::map<std::string, std::string> in_map, out_map;
    for (std::size_t i = 0; i < ins.size(); ++i) {
      spec.in_ports.push_back({"in" + std::to_string(i), PortDirection::In, kX});
      in_map["in" + std::to_string(i)] = ins[i];
    }
    for (std::size_t i = 0; i < outs.size(); ++i) {
      spec.out_ports.push_back({"out" + std::to_string(i), PortDirection::Out, kX});
      out_map["out" + std::to_string(i)] = outs[i];
    }
    const NodeSpec copy = spec;
    spec.transform = [copy](const NodeInput& in) { return copy_all(copy, in); };
    graph.add_node(std::move(spec), in_map, out_map);
    return *this;
  }

  FlowGraph graph;
};

/// i -> A -> s -> B -> o
inline FlowGraph chain() {
  GraphBuilder b;
  b.input("i").internal("s").output("o").node("A", {"i"}, {"s"}).node("B", {"s"}, {"o"});
  return b.graph;
}

/// i -> A -> {s1, s2}; s1 -> B -> o1; s2 -> C -> o2
inline FlowGraph diamond() {
  GraphBuilder b;
  b.input("i").internal("s1").internal("s2").output("o1").output("o2");
  b.node("A", {"i"}, {"s1", "s2"}).node("B", {"s1"}, {"o1"}).node("C", {"s2"}, {"o2"});
  return b.graph;
}

/// Random valid DAG: every node reads one or two earlier streams and writes a
/// fresh one. Streams nobody reads become outputs.
inline FlowGraph random_dag(Rng& rng, int max_nodes = 20) {
  const int inputs = static_cast<int>(rng.between(1, 3));
  const int nodes = static_cast<int>(rng.between(std::max(1, inputs), max_nodes));
  std::vector<std::string> streams;
  std::vector<int> consumers;
  std::vector<std::vector<int>> reads(nodes);
  for (int i = 0; i < inputs; ++i) {
    streams.push_back("in" + std::to_string(i));
    consumers.push_back(0);
  }
  for (int n = 0; n < nodes; ++n) {
    const int first = n < inputs ? n : static_cast<int>(rng.below(streams.size()));
    reads[n].push_back(first);
    if (rng.chance(0.4) && streams.size() > 1) {
      int second = static_cast<int>(rng.below(streams.size()));
      if (second != first) reads[n].push_back(second);
    }
    for (int s : reads[n]) ++consumers[s];
    streams.push_back("s" + std::to_string(n));
    consumers.push_back(0);
  }
  GraphBuilder b;
  for (std::size_t s = 0; s < streams.size(); ++s) {
    if (static_cast<int>(s) < inputs) {
      b.input(streams[s]);
    } else {
      b.stream(streams[s], consumers[s] ? StreamCategory::Internal : StreamCategory::Output);
    }
  }
  for (int n = 0; n < nodes; ++n) {
    std::vector<std::string> ins;
    for (int s : reads[n]) ins.push_back(streams[s]);
    char id[16];
    std::snprintf(id, sizeof id, "n%02d", n);
    b.node(id, ins, {streams[inputs + n]});
  }
  return b.graph;
}

}  // namespace doa::testing
