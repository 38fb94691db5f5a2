#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "doa/graph/flow_graph.hpp"
#include "doa/soa/registry.hpp"

namespace doa::metrics {

/// Component id -> fingerprint, for one application version.
struct ComponentManifest {
  std::string version_key;
  std::map<std::string, std::string> components;

  std::size_t size() const { return components.size(); }
};

/// Components are "node:<id>" and "stream:<id>".
ComponentManifest manifest_of(const FlowGraph& graph, std::string version_key);
/// Components are "api:<service>.<api>" and "routine:<service>.<routine>".
ComponentManifest manifest_of(const std::vector<soa::ServiceSpec>& services,
                              std::string version_key);

struct ComponentDiff {
  std::set<std::string> added;
  std::set<std::string> removed;
  std::set<std::string> changed;

  std::size_t affected_count() const { return added.size() + removed.size() + changed.size(); }
};

ComponentDiff diff(const ComponentManifest& a, const ComponentManifest& b);

/// Two-column table sorted by component id, then "affected_count N".
std::string format_diff(const ComponentDiff& d);

}  // namespace doa::metrics
