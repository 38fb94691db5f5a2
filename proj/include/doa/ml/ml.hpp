#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "doa/core/json_codec.hpp"
#include "doa/core/rng.hpp"

namespace doa::ml {

class MlError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Linear regression

struct LinearSample {
  std::vector<double> features;
  double label = 0.0;
};

struct LinearModel {
  std::vector<double> coefficients;
  double intercept = 0.0;

  bool operator==(const LinearModel&) const = default;
};

/// Least squares via the normal equations on centered data. A singular system
/// is re-solved with a ridge penalty of 1e-8 on the coefficients.
LinearModel fit_linear(std::span<const LinearSample> rows);
double predict_linear(const LinearModel& model, std::span<const double> features);

// ---------------------------------------------------------------------------
// Decision tree (Gini)

struct TreeSample {
  std::vector<double> features;
  std::string label;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  std::string label;  // majority class of the samples that reached the node

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct TreeModel {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  int max_depth = 0;

  int depth() const;
  bool operator==(const TreeModel&) const = default;
};

/// Greedy top-down CART. Candidate thresholds are midpoints between
/// consecutive distinct values; ties go to the lowest feature index, then the
/// lowest threshold. Leaves take the majority class (lexicographic on ties).
TreeModel fit_tree(std::span<const TreeSample> rows, int max_depth);
/// Goes left iff feature < threshold.
const std::string& predict_tree(const TreeModel& model, std::span<const double> features);

// ---------------------------------------------------------------------------
// Bigram text model

inline const std::string kStartToken = "<s>";
inline const std::string kEndToken = "</s>";

struct BigramModel {
  std::map<std::string, std::map<std::string, std::uint64_t>> counts;
  std::set<std::string> vocabulary{kStartToken, kEndToken};

  bool operator==(const BigramModel&) const = default;
};

std::vector<std::string> tokenize(std::string_view text);
std::string join_tokens(const std::vector<std::string>& tokens);

BigramModel fit_bigram(std::span<const std::vector<std::string>> documents);
/// Walks from START, sampling successors proportionally to their counts, until
/// END or max_len tokens.
std::vector<std::string> generate(const BigramModel& model, Rng& rng, std::size_t max_len);

// ---------------------------------------------------------------------------
// Exact quantiles

class QuantileSketch {
 public:
  QuantileSketch() = default;
  explicit QuantileSketch(std::vector<double> values);

  void add(double value);
  const std::vector<double>& values() const { return sorted_; }
  std::size_t size() const { return sorted_.size(); }
  bool empty() const { return sorted_.empty(); }

 private:
  std::vector<double> sorted_;
};

/// Nearest-rank: the value at 1-based index ceil(q * n), with q = 0 mapping to
/// the first value.
double quantile(const QuantileSketch& sketch, double q);

// ---------------------------------------------------------------------------
// Serialization (canonical JSON, one object per model)

Document to_document(const LinearModel& model);
Document to_document(const TreeModel& model);
Document to_document(const BigramModel& model);
LinearModel linear_from_document(const Document& doc);
TreeModel tree_from_document(const Document& doc);
BigramModel bigram_from_document(const Document& doc);

void save_model(const Document& model, const std::filesystem::path& path);
Document load_model(const std::filesystem::path& path);

}  // namespace doa::ml
