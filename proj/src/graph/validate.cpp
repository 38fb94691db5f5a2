#include "doa/graph/validate.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace doa {

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::UnknownReference: return "unknown-reference";
    case ViolationKind::UnwiredPort: return "unwired-port";
    case ViolationKind::MultiplyWiredPort: return "multiply-wired-port";
    case ViolationKind::SchemaMismatch: return "schema-mismatch";
    case ViolationKind::InputHasProducer: return "input-has-producer";
    case ViolationKind::OutputHasConsumer: return "output-has-consumer";
    case ViolationKind::InternalProducerCount: return "internal-producer-count";
    case ViolationKind::InternalWithoutConsumer: return "internal-without-consumer";
    case ViolationKind::Cycle: return "cycle";
    case ViolationKind::Orphan: return "orphan";
  }
  return "?";
}

std::size_t ValidationReport::count(ViolationKind kind) const {
  return static_cast<std::size_t>(std::count_if(
      violations.begin(), violations.end(), [&](const Violation& v) { return v.kind == kind; }));
}

std::string ValidationReport::summary() const {
  std::ostringstream out;
  for (const auto& v : violations) {
    out << to_string(v.kind) << ": " << v.message << '\n';
  }
  return out.str();
}

namespace {

struct Wiring {
  // node -> successor nodes through any stream
  std::map<std::string, std::set<std::string>> successors;
  // valid edges only
  std::vector<InEdge> in;
  std::vector<OutEdge> out;
};

void check_edges(const FlowGraph& g, ValidationReport& report, Wiring& w) {
  auto unknown = [&](std::string id, std::string msg) {
    report.violations.push_back({ViolationKind::UnknownReference, {std::move(id)}, std::move(msg)});
  };
  auto mismatch = [&](const std::string& node, const std::string& port, const StreamDecl& s,
                      const PortDecl& p) {
    if (!(p.schema == s.schema)) {
      report.violations.push_back(
          {ViolationKind::SchemaMismatch,
           {node, s.id},
           "port " + node + "." + port + " expects " + p.schema.signature() + " but stream " +
               s.id + " carries " + s.schema.signature()});
    }
  };

  for (const auto& e : g.in_edges()) {
    const StreamDecl* s = g.find_stream(e.stream);
    const NodeSpec* n = g.find_node(e.node);
    if (!s) { unknown(e.stream, "edge references unknown stream " + e.stream); continue; }
    if (!n) { unknown(e.node, "edge references unknown node " + e.node); continue; }
    const PortDecl* p = n->find_port(e.port, PortDirection::In);
    if (!p) { unknown(e.node, "node " + e.node + " has no in-port " + e.port); continue; }
    mismatch(e.node, e.port, *s, *p);
    w.in.push_back(e);
  }
  for (const auto& e : g.out_edges()) {
    const StreamDecl* s = g.find_stream(e.stream);
    const NodeSpec* n = g.find_node(e.node);
    if (!s) { unknown(e.stream, "edge references unknown stream " + e.stream); continue; }
    if (!n) { unknown(e.node, "edge references unknown node " + e.node); continue; }
    const PortDecl* p = n->find_port(e.port, PortDirection::Out);
    if (!p) { unknown(e.node, "node " + e.node + " has no out-port " + e.port); continue; }
    mismatch(e.node, e.port, *s, *p);
    w.out.push_back(e);
  }
}

void check_ports(const FlowGraph& g, const Wiring& w, ValidationReport& report) {
  for (const auto& [id, node] : g.nodes()) {
    for (const auto& p : node.in_ports) {
      auto hits = std::count_if(w.in.begin(), w.in.end(), [&](const InEdge& e) {
        return e.node == id && e.port == p.name;
      });
      if (hits == 0) {
        report.violations.push_back(
            {ViolationKind::UnwiredPort, {id}, "unwired port " + id + "." + p.name});
      } else if (hits > 1) {
        report.violations.push_back({ViolationKind::MultiplyWiredPort, {id},
                                     "port " + id + "." + p.name + " is wired " +
                                         std::to_string(hits) + " times"});
      }
    }
    for (const auto& p : node.out_ports) {
      auto hits = std::count_if(w.out.begin(), w.out.end(), [&](const OutEdge& e) {
        return e.node == id && e.port == p.name;
      });
      if (hits == 0) {
        report.violations.push_back(
            {ViolationKind::UnwiredPort, {id}, "unwired port " + id + "." + p.name});
      } else if (hits > 1) {
        report.violations.push_back({ViolationKind::MultiplyWiredPort, {id},
                                     "port " + id + "." + p.name + " is wired " +
                                         std::to_string(hits) + " times"});
      }
    }
  }
}

void check_categories(const FlowGraph& g, const Wiring& w, ValidationReport& report) {
  for (const auto& [id, stream] : g.streams()) {
    std::set<std::string> producers, consumers;
    for (const auto& e : w.out) if (e.stream == id) producers.insert(e.node);
    for (const auto& e : w.in) if (e.stream == id) consumers.insert(e.node);
    switch (stream.category) {
      case StreamCategory::Input:
        if (!producers.empty()) {
          report.violations.push_back({ViolationKind::InputHasProducer, {id},
                                       "input stream " + id + " is produced by a node"});
        }
        break;
      case StreamCategory::Output:
        if (!consumers.empty()) {
          report.violations.push_back({ViolationKind::OutputHasConsumer, {id},
                                       "output stream " + id + " is consumed by a node"});
        }
        break;
      case StreamCategory::Internal:
        if (producers.size() != 1) {
          report.violations.push_back(
              {ViolationKind::InternalProducerCount, {id},
               "internal stream " + id + " has " + std::to_string(producers.size()) +
                   " producers, expected 1"});
        }
        if (consumers.empty()) {
          report.violations.push_back({ViolationKind::InternalWithoutConsumer, {id},
                                       "internal stream " + id + " has no consumer"});
        }
        break;
    }
  }
}

// Tarjan's strongly connected components over the node graph.
void check_cycles(const FlowGraph& g, Wiring& w, ValidationReport& report) {
  std::map<std::string, std::set<std::string>> producers_of;
  for (const auto& e : w.out) producers_of[e.stream].insert(e.node);
  for (const auto& e : w.in) {
    for (const auto& p : producers_of[e.stream]) w.successors[p].insert(e.node);
  }

  std::map<std::string, int> index, low;
  std::set<std::string> on_stack;
  std::vector<std::string> stack;
  int counter = 0;
  std::vector<std::vector<std::string>> cycles;

  std::function<void(const std::string&)> visit = [&](const std::string& v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack.insert(v);
    for (const auto& s : w.successors[v]) {
      if (!index.count(s)) {
        visit(s);
        low[v] = std::min(low[v], low[s]);
      } else if (on_stack.count(s)) {
        low[v] = std::min(low[v], index[s]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::string> component;
      std::string x;
      do {
        x = stack.back();
        stack.pop_back();
        on_stack.erase(x);
        component.push_back(x);
      } while (x != v);
      const bool self_loop = w.successors[v].count(v) > 0;
      if (component.size() > 1 || self_loop) {
        std::sort(component.begin(), component.end());
        cycles.push_back(std::move(component));
      }
    }
  };
  for (const auto& [id, node] : g.nodes()) {
    if (!index.count(id)) visit(id);
  }
  std::sort(cycles.begin(), cycles.end());
  for (auto& c : cycles) {
    std::string msg = "cycle among {";
    for (std::size_t i = 0; i < c.size(); ++i) msg += (i ? ", " : "") + c[i];
    msg += "}";
    report.violations.push_back({ViolationKind::Cycle, std::move(c), std::move(msg)});
  }
}

void check_connectivity(const FlowGraph& g, const Wiring& w, ValidationReport& report) {
  // Forward from inputs.
  std::set<std::string> reached;
  std::deque<std::string> queue;
  for (const auto& [id, s] : g.streams()) {
    if (s.category == StreamCategory::Input) {
      reached.insert(id);
      queue.push_back(id);
    }
  }
  while (!queue.empty()) {
    const std::string cur = queue.front();
    queue.pop_front();
    for (const auto& e : w.in) {
      if (e.stream == cur && reached.insert(e.node).second) queue.push_back(e.node);
    }
    for (const auto& e : w.out) {
      if (e.node == cur && reached.insert(e.stream).second) queue.push_back(e.stream);
    }
  }
  // Backward from outputs.
  std::set<std::string> leads;
  for (const auto& [id, s] : g.streams()) {
    if (s.category == StreamCategory::Output) {
      leads.insert(id);
      queue.push_back(id);
    }
  }
  while (!queue.empty()) {
    const std::string cur = queue.front();
    queue.pop_front();
    for (const auto& e : w.out) {
      if (e.stream == cur && leads.insert(e.node).second) queue.push_back(e.node);
    }
    for (const auto& e : w.in) {
      if (e.node == cur && leads.insert(e.stream).second) queue.push_back(e.stream);
    }
  }
  for (const auto& [id, node] : g.nodes()) {
    if (!reached.count(id)) {
      report.violations.push_back(
          {ViolationKind::Orphan, {id}, "node " + id + " is not reachable from any input stream"});
    } else if (!node.out_ports.empty() && !leads.count(id)) {
      report.violations.push_back(
          {ViolationKind::Orphan, {id}, "node " + id + " does not lead to any output stream"});
    }
  }
}

}  // namespace

ValidationReport validate(const FlowGraph& graph) {
  ValidationReport report;
  Wiring wiring;
  check_edges(graph, report, wiring);
  check_ports(graph, wiring, report);
  check_categories(graph, wiring, report);
  check_cycles(graph, wiring, report);
  check_connectivity(graph, wiring, report);
  return report;
}

}  // namespace doa
