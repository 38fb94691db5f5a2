#include <algorithm>
#include <set>

#include "doa/collection/collection.hpp"
#include "doa/graph/traversal.hpp"

namespace doa {

std::vector<std::string> discover_sources(const FlowGraph& graph, std::string_view label_stream) {
  if (!graph.find_stream(label_stream)) {
    throw CollectionError("unknown stream '" + std::string(label_stream) + "'");
  }
  std::vector<std::string> out;
  for (const auto& id : upstream_closure(graph, label_stream)) {
    const StreamDecl* s = graph.find_stream(id);
    if (!s || id == label_stream) continue;
    if (s->category == StreamCategory::Input || s->category == StreamCategory::Internal) {
      out.push_back(id);
    }
  }
  return out;  // std::set iteration is already sorted
}

namespace {

const StreamDecl& require_stream(const FlowGraph& graph, const std::string& id) {
  const StreamDecl* s = graph.find_stream(id);
  if (!s) throw CollectionError("collection references unknown stream '" + id + "'");
  return *s;
}

void require_field(const StreamDecl& s, const std::string& field) {
  if (!s.schema.has(field)) {
    throw CollectionError("stream '" + s.id + "' has no field '" + field + "'");
  }
}

/// key value -> record index; throws on a repeated key.
std::map<Value, std::size_t> index_by_key(const Schema& schema, std::span<const Record> records,
                                          const std::string& key, const std::string& stream) {
  const std::size_t k = schema.index_of(key);
  std::map<Value, std::size_t> index;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!index.emplace(records[i].values[k], i).second) {
      throw CollectionError("duplicate key " + to_display(records[i].values[k]) + " in stream '" +
                            stream + "'");
    }
  }
  return index;
}

}  // namespace

void check_spec(const FlowGraph& graph, const CollectionSpec& spec) {
  const StreamDecl& label = require_stream(graph, spec.label.stream);
  require_field(label, spec.label.key);
  const FieldType key_type = label.schema.fields()[label.schema.index_of(spec.label.key)].type;
  std::set<std::string> label_names;
  for (const auto& f : spec.label.fields) {
    require_field(label, f);
    if (!label_names.insert(f).second) {
      throw CollectionError("label field '" + f + "' selected twice");
    }
  }
  std::set<std::string> feature_names;
  for (const auto& sel : spec.features) {
    const StreamDecl& s = require_stream(graph, sel.stream);
    require_field(s, sel.key);
    if (s.schema.fields()[s.schema.index_of(sel.key)].type != key_type) {
      throw CollectionError("key '" + sel.key + "' of stream '" + sel.stream +
                            "' does not match the label key type");
    }
    for (const auto& f : sel.fields) {
      require_field(s, f);
      if (!feature_names.insert(sel.stream + "." + f).second) {
        throw CollectionError("feature '" + sel.stream + "." + f + "' selected twice");
      }
    }
  }
}

std::vector<DatasetRow> collect(const RuntimeInstance& instance, const CollectionSpec& spec) {
  const FlowGraph& graph = instance.graph();
  check_spec(graph, spec);

  const Schema& label_schema = graph.find_stream(spec.label.stream)->schema;
  auto label_records = instance.log(spec.label.stream);
  // Building the index also rejects duplicate label keys.
  index_by_key(label_schema, label_records, spec.label.key, spec.label.stream);

  struct FeatureSource {
    const StreamSelection* selection;
    const Schema* schema;
    std::span<const Record> records;
    std::map<Value, std::size_t> index;
  };
  std::vector<FeatureSource> sources;
  for (const auto& sel : spec.features) {
    const Schema& schema = graph.find_stream(sel.stream)->schema;
    auto records = instance.log(sel.stream);
    sources.push_back({&sel, &schema, records, index_by_key(schema, records, sel.key, sel.stream)});
  }

  const std::size_t key_index = label_schema.index_of(spec.label.key);
  std::vector<DatasetRow> rows;
  for (const auto& rec : label_records) {
    const Value& key = rec.values[key_index];
    DatasetRow row;
    row.key = key;
    bool complete = true;
    for (const auto& src : sources) {
      auto hit = src.index.find(key);
      if (hit == src.index.end()) {
        complete = false;
        break;
      }
      const Record& feature = src.records[hit->second];
      for (const auto& f : src.selection->fields) {
        row.features[src.selection->stream + "." + f] = feature.values[src.schema->index_of(f)];
      }
    }
    if (!complete) continue;
    for (const auto& f : spec.label.fields) {
      row.label[f] = rec.values[label_schema.index_of(f)];
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void add_collector(FlowGraph& graph, const CollectionSpec& spec, const std::string& node_id,
                   const std::string& logic_version) {
  check_spec(graph, spec);
  const auto sources = discover_sources(graph, spec.label.stream);
  for (const auto& sel : spec.features) {
    if (!std::binary_search(sources.begin(), sources.end(), sel.stream)) {
      throw CollectionError("feature stream '" + sel.stream + "' is not upstream of label '" +
                            spec.label.stream + "'");
    }
  }

  std::vector<StreamSelection> selections{spec.label};
  selections.insert(selections.end(), spec.features.begin(), spec.features.end());

  NodeSpec node;
  node.id = node_id;
  node.logic_version = logic_version;
  std::map<std::string, std::string> inputs;
  std::vector<std::pair<std::string, std::string>> port_keys;
  for (std::size_t i = 0; i < selections.size(); ++i) {
    const std::string port = i == 0 ? "label" : "feature" + std::to_string(i - 1);
    node.in_ports.push_back(
        {port, PortDirection::In, graph.find_stream(selections[i].stream)->schema});
    inputs[port] = selections[i].stream;
    port_keys.emplace_back(port, selections[i].key);
  }
  node.transform = [port_keys](const NodeInput& in) -> NodeOutput {
    for (const auto& [port, key] : port_keys) {
      const PortView& view = in[port];
      const std::size_t k = view.schema->index_of(key);
      std::set<Value> seen;
      for (const auto& r : view.history) {
        if (!seen.insert(r.values[k]).second) {
          throw CollectionError("duplicate key " + to_display(r.values[k]) + " on port " + port);
        }
      }
    }
    return {};
  };
  graph.add_node(std::move(node), inputs, {});
}

}  // namespace doa
