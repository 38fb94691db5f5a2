#include "doa/runtime/runtime.hpp"

#include "doa/core/json_codec.hpp"
#include "doa/graph/traversal.hpp"
#include "doa/graph/validate.hpp"

namespace doa {

RuntimeInstance RuntimeInstance::start(FlowGraph graph, std::uint64_t seed) {
  return start(std::make_shared<const FlowGraph>(std::move(graph)), seed);
}

RuntimeInstance RuntimeInstance::start(std::shared_ptr<const FlowGraph> graph,
                                       std::uint64_t seed) {
  if (!graph) throw RuntimeError("no graph");
  if (auto report = validate(*graph); !report.ok()) {
    throw RuntimeError("invalid graph: " + report.violations.front().message);
  }
  RuntimeInstance rt;
  rt.graph_ = std::move(graph);
  rt.seed_ = seed;
  rt.order_ = topological_order(*rt.graph_);
  for (const auto& [id, stream] : rt.graph_->streams()) rt.logs_[id];
  for (const auto& [id, node] : rt.graph_->nodes()) {
    NodeState state;
    state.spec = &node;
    for (const auto& p : node.in_ports) {
      state.inputs.push_back({p.name, *rt.graph_->wired_stream(id, p.name, PortDirection::In)});
    }
    for (const auto& p : node.out_ports) {
      state.outputs.push_back({p.name, *rt.graph_->wired_stream(id, p.name, PortDirection::Out)});
    }
    state.cursors.assign(state.inputs.size(), 0);
    rt.nodes_.emplace(id, std::move(state));
  }
  return rt;
}

std::vector<Record>& RuntimeInstance::mutable_log(std::string_view stream) {
  auto it = logs_.find(stream);
  if (it == logs_.end()) throw RuntimeError("unknown stream '" + std::string(stream) + "'");
  return it->second;
}

std::span<const Record> RuntimeInstance::log(std::string_view stream) const {
  auto it = logs_.find(stream);
  if (it == logs_.end()) throw RuntimeError("unknown stream '" + std::string(stream) + "'");
  return it->second;
}

Record RuntimeInstance::inject(std::string_view stream, Row values) {
  const StreamDecl* decl = graph_->find_stream(stream);
  if (!decl) throw RuntimeError("unknown stream '" + std::string(stream) + "'");
  if (decl->category != StreamCategory::Input) {
    throw RuntimeError("'" + decl->id + "' is not an input stream");
  }
  if (auto err = decl->schema.check(values); !err.empty()) {
    throw RuntimeError("schema mismatch on " + decl->id + ": " + err);
  }
  auto& log = mutable_log(stream);
  log.push_back(Record{std::move(values), tick_, static_cast<Int>(log.size())});
  return log.back();
}

void RuntimeInstance::run_node(NodeState& state, TickSummary& summary) {
  const NodeSpec& spec = *state.spec;
  NodeInput input(tick_, seed_);
  std::vector<std::size_t> lengths;
  for (std::size_t i = 0; i < state.inputs.size(); ++i) {
    const auto& binding = state.inputs[i];
    std::span<const Record> history = log(binding.stream);
    lengths.push_back(history.size());
    input.bind(binding.port, PortView{&graph_->streams().at(binding.stream).schema, history,
                                      state.cursors[i]});
  }

  NodeOutput output;
  try {
    output = spec.transform ? spec.transform(input) : NodeOutput{};
  } catch (const std::exception& e) {
    throw RuntimeError("node " + spec.id + " failed at tick " + std::to_string(tick_) + ": " +
                       e.what());
  }

  // Check everything before appending so a rejected tick leaves no partial output.
  for (const auto& [port, rows] : output) {
    const PortDecl* decl = spec.find_port(port, PortDirection::Out);
    if (!decl) throw RuntimeError("node " + spec.id + " emitted on unknown port " + port);
    for (const auto& row : rows) {
      if (auto err = decl->schema.check(row); !err.empty()) {
        throw RuntimeError("node " + spec.id + " port " + port + " emitted a bad record: " + err);
      }
    }
  }
  for (auto& [port, rows] : output) {
    const auto& binding = *std::find_if(state.outputs.begin(), state.outputs.end(),
                                        [&](const PortBinding& b) { return b.port == port; });
    auto& log = mutable_log(binding.stream);
    for (auto& row : rows) {
      log.push_back(Record{std::move(row), tick_, static_cast<Int>(log.size())});
    }
    summary.produced[binding.stream] += rows.size();
  }
  for (std::size_t i = 0; i < state.cursors.size(); ++i) state.cursors[i] = lengths[i];
  ++state.invocations;
}

TickSummary RuntimeInstance::step() {
  if (failed_) throw RuntimeError("instance aborted by an earlier failure");
  TickSummary summary;
  summary.tick = tick_;
  for (const auto& [id, stream] : graph_->streams()) {
    if (stream.category != StreamCategory::Input) summary.produced[id] = 0;
  }
  try {
    for (const auto& id : order_) run_node(nodes_.find(id)->second, summary);
  } catch (...) {
    failed_ = true;
    throw;
  }
  ++tick_;
  return summary;
}

std::vector<Record> RuntimeInstance::read(std::string_view stream, std::size_t from_seq) const {
  auto records = log(stream);
  if (from_seq >= records.size()) return {};
  return {records.begin() + static_cast<std::ptrdiff_t>(from_seq), records.end()};
}

std::size_t RuntimeInstance::cursor(std::string_view node, std::string_view in_port) const {
  auto it = nodes_.find(node);
  if (it == nodes_.end()) throw RuntimeError("unknown node '" + std::string(node) + "'");
  for (std::size_t i = 0; i < it->second.inputs.size(); ++i) {
    if (it->second.inputs[i].port == in_port) return it->second.cursors[i];
  }
  throw RuntimeError("node " + std::string(node) + " has no in-port " + std::string(in_port));
}

std::uint64_t RuntimeInstance::invocations(std::string_view node) const {
  auto it = nodes_.find(node);
  if (it == nodes_.end()) throw RuntimeError("unknown node '" + std::string(node) + "'");
  return it->second.invocations;
}

std::string RuntimeInstance::dump() const {
  Document doc = Document::object();
  for (const auto& [id, records] : logs_) {
    const Schema& schema = graph_->streams().at(id).schema;
    Document list = Document::array();
    for (const auto& r : records) {
      list.push_back({{"seq", r.seq}, {"tick", r.tick}, {"values", record_to_document(schema, r)}});
    }
    doc[id] = std::move(list);
  }
  return doc.dump();
}

}  // namespace doa
