#include "doa/metrics/manifest.hpp"

#include <algorithm>

#include "doa/core/hash.hpp"

namespace doa::metrics {

namespace {

void add_ports(Fnv1a& h, const FlowGraph& graph, const NodeSpec& node,
               const std::vector<PortDecl>& ports, PortDirection dir) {
  std::vector<const PortDecl*> sorted;
  for (const auto& p : ports) sorted.push_back(&p);
  std::sort(sorted.begin(), sorted.end(),
            [](const PortDecl* a, const PortDecl* b) { return a->name < b->name; });
  h.add(dir == PortDirection::In ? "in[" : "out[");
  for (const PortDecl* p : sorted) {
    h.add(p->name).add("=").add(graph.wired_stream(node.id, p->name, dir).value_or("")).add(":");
    h.add(p->schema.signature()).add(";");
  }
  h.add("]");
}

void add_fields(Fnv1a& h, const char* tag, const std::set<std::string>& fields) {
  h.add(tag).add("[");
  for (const auto& f : fields) h.add(f).add(",");
  h.add("]");
}

}  // namespace

ComponentManifest manifest_of(const FlowGraph& graph, std::string version_key) {
  ComponentManifest m{std::move(version_key), {}};
  for (const auto& [id, node] : graph.nodes()) {
    Fnv1a h;
    add_ports(h, graph, node, node.in_ports, PortDirection::In);
    add_ports(h, graph, node, node.out_ports, PortDirection::Out);
    h.add("logic=").add(node.logic_version);
    m.components["node:" + id] = h.hex();
  }
  for (const auto& [id, stream] : graph.streams()) {
    Fnv1a h;
    h.add(to_string(stream.category)).add("|").add(stream.schema.signature());
    m.components["stream:" + id] = h.hex();
  }
  return m;
}

ComponentManifest manifest_of(const std::vector<soa::ServiceSpec>& services,
                              std::string version_key) {
  ComponentManifest m{std::move(version_key), {}};
  for (const auto& s : services) {
    for (const auto& a : s.apis) {
      Fnv1a h;
      add_fields(h, "request", a.signature.inputs);
      add_fields(h, "response", a.signature.outputs);
      h.add("logic=").add(a.logic_version);
      m.components["api:" + s.id + "." + a.name] = h.hex();
    }
    for (const auto& r : s.routines) {
      Fnv1a h;
      add_fields(h, "args", r.signature.inputs);
      add_fields(h, "result", r.signature.outputs);
      h.add("logic=").add(r.logic_version);
      m.components["routine:" + s.id + "." + r.name] = h.hex();
    }
  }
  return m;
}

}  // namespace doa::metrics
