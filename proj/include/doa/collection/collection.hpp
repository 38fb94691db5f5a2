#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "doa/core/schema.hpp"
#include "doa/graph/flow_graph.hpp"
#include "doa/runtime/runtime.hpp"

namespace doa {

class CollectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fields taken from one stream, plus the correlation key used to join it.
struct StreamSelection {
  std::string stream;
  std::vector<std::string> fields;
  std::string key;
};

/// Declares an (X, y) dataset: one label stream joined with feature streams.
struct CollectionSpec {
  StreamSelection label;
  std::vector<StreamSelection> features;
  std::string dataset_name;
};

/// Feature keys are "<stream>.<field>", label keys are plain field names.
struct DatasetRow {
  Value key;
  std::map<std::string, Value> features;
  std::map<std::string, Value> label;

  bool operator==(const DatasetRow&) const = default;
};

/// Input and Internal streams upstream of the label stream (label excluded),
/// sorted by id: the candidate feature sources for that label.
std::vector<std::string> discover_sources(const FlowGraph& graph, std::string_view label_stream);

/// Throws CollectionError when the spec references missing streams or fields,
/// mixes key types, or selects the same prefixed field twice.
void check_spec(const FlowGraph& graph, const CollectionSpec& spec);

/// Inner join of the label stream with every feature stream on the key, in
/// label seq order. A key repeated within one stream is an error.
std::vector<DatasetRow> collect(const RuntimeInstance& instance, const CollectionSpec& spec);

/// Adds a sink node whose in-ports are wired to the label and feature streams.
/// Every feature stream must be among discover_sources(label). The node emits
/// nothing; at run time it rejects repeated keys as soon as they arrive.
void add_collector(FlowGraph& graph, const CollectionSpec& spec, const std::string& node_id,
                   const std::string& logic_version);

/// Canonical single-line JSON for a row (sorted keys, shortest float form).
std::string dataset_line(const DatasetRow& row);
/// Throws CollectionError on malformed input.
DatasetRow parse_dataset_line(std::string_view line);

/// Writes JSON-Lines (LF); returns the number of rows written.
std::size_t write_dataset(const std::vector<DatasetRow>& rows, const std::filesystem::path& path);
/// Malformed lines are reported with their 1-based line number.
std::vector<DatasetRow> read_dataset(const std::filesystem::path& path);

}  // namespace doa
