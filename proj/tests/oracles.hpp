#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "doa/collection/collection.hpp"
#include "doa/graph/flow_graph.hpp"
#include "doa/runtime/runtime.hpp"

namespace doa::testing {

/// Element -> element edges (stream->node and node->stream) as plain pairs.
inline std::vector<std::pair<std::string, std::string>> edge_list(const FlowGraph& g) {
  std::vector<std::pair<std::string, std::string>> edges;
  for (const auto& e : g.in_edges()) edges.emplace_back(e.stream, e.node);
  for (const auto& e : g.out_edges()) edges.emplace_back(e.node, e.stream);
  return edges;
}

/// Transitive closure by repeated relaxation until nothing changes.
inline std::map<std::string, std::set<std::string>> reach(const FlowGraph& g) {
  std::map<std::string, std::set<std::string>> r;
  for (const auto& [id, s] : g.streams()) r[id] = {id};
  for (const auto& [id, n] : g.nodes()) r[id] = {id};
  const auto edges = edge_list(g);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [a, b] : edges) {
      for (const auto& x : std::set<std::string>(r[b])) changed |= r[a].insert(x).second;
    }
  }
  return r;
}

inline std::set<std::string> brute_upstream(const FlowGraph& g, const std::string& target) {
  std::set<std::string> out;
  for (const auto& [from, to] : reach(g)) {
    if (to.count(target)) out.insert(from);
  }
  return out;
}

inline std::set<std::string> brute_downstream(const FlowGraph& g, const std::string& source) {
  return reach(g).at(source);
}

/// True when `order` is a permutation of the node ids in which every producer
/// of a stream comes before each of its consumers.
inline bool respects_edges(const FlowGraph& g, const std::vector<std::string>& order) {
  std::vector<std::string> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::string> ids;
  for (const auto& [id, n] : g.nodes()) ids.push_back(id);
  if (sorted != ids) return false;
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  for (const auto& out : g.out_edges()) {
    for (const auto& in : g.in_edges()) {
      if (in.stream == out.stream && pos[out.node] >= pos[in.node]) return false;
    }
  }
  return true;
}

/// Nested-loop inner join, straight from the definition.
inline std::vector<DatasetRow> brute_join(const RuntimeInstance& rt, const CollectionSpec& spec) {
  const Schema& ls = rt.graph().find_stream(spec.label.stream)->schema;
  std::vector<DatasetRow> rows;
  for (const Record& l : rt.read(spec.label.stream)) {
    DatasetRow row;
    row.key = l.values[ls.index_of(spec.label.key)];
    for (const auto& f : spec.label.fields) row.label[f] = l.values[ls.index_of(f)];
    bool complete = true;
    for (const auto& sel : spec.features) {
      const Schema& fs = rt.graph().find_stream(sel.stream)->schema;
      int matches = 0;
      for (const Record& r : rt.read(sel.stream)) {
        if (r.values[fs.index_of(sel.key)] != row.key) continue;
        ++matches;
        for (const auto& f : sel.fields) row.features[sel.stream + "." + f] = r.values[fs.index_of(f)];
      }
      if (matches == 0) complete = false;
    }
    if (complete) rows.push_back(std::move(row));
  }
  return rows;
}

/// Nearest-rank quantile for q = num/den without floating point: the k-th
/// smallest value for the least k >= 1 with k * den >= num * n.
inline double brute_quantile(std::vector<double> values, long num, long den) {
  std::sort(values.begin(), values.end());
  const long n = static_cast<long>(values.size());
  long k = 1;
  while (k * den < num * n) ++k;
  return values[static_cast<std::size_t>(k - 1)];
}

}  // namespace doa::testing
