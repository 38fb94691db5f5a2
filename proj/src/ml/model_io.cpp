#include <fstream>

#include "doa/ml/ml.hpp"

namespace doa::ml {

Document to_document(const LinearModel& model) {
  return {{"coefficients", model.coefficients}, {"intercept", model.intercept}, {"type", "linear"}};
}

Document to_document(const TreeModel& model) {
  Document nodes = Document::array();
  for (const auto& n : model.nodes) {
    nodes.push_back({{"feature", n.feature},
                     {"label", n.label},
                     {"left", n.left},
                     {"right", n.right},
                     {"threshold", n.threshold}});
  }
  return {{"max_depth", model.max_depth}, {"nodes", nodes}, {"type", "tree"}};
}

Document to_document(const BigramModel& model) {
  return {{"counts", model.counts}, {"type", "bigram"}, {"vocabulary", model.vocabulary}};
}

namespace {

void expect_type(const Document& doc, std::string_view type) {
  if (!doc.is_object() || doc.value("type", "") != type) {
    throw MlError("expected a " + std::string(type) + " model document");
  }
}

}  // namespace

LinearModel linear_from_document(const Document& doc) {
  expect_type(doc, "linear");
  return {doc.at("coefficients").get<std::vector<double>>(), doc.at("intercept").get<double>()};
}

TreeModel tree_from_document(const Document& doc) {
  expect_type(doc, "tree");
  TreeModel model;
  model.max_depth = doc.at("max_depth").get<int>();
  for (const auto& n : doc.at("nodes")) {
    model.nodes.push_back({n.at("feature").get<int>(), n.at("threshold").get<double>(),
                           n.at("left").get<int>(), n.at("right").get<int>(),
                           n.at("label").get<std::string>()});
  }
  const auto size = static_cast<int>(model.nodes.size());
  for (const auto& n : model.nodes) {
    if (!n.is_leaf() && (n.left < 0 || n.left >= size || n.right < 0 || n.right >= size)) {
      throw MlError("tree document has a dangling child index");
    }
  }
  return model;
}

BigramModel bigram_from_document(const Document& doc) {
  expect_type(doc, "bigram");
  BigramModel model;
  model.counts = doc.at("counts").get<decltype(model.counts)>();
  model.vocabulary = doc.at("vocabulary").get<std::set<std::string>>();
  return model;
}

void save_model(const Document& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw MlError("cannot open " + path.string() + " for writing");
  out << model.dump() << '\n';
  if (!out) throw MlError("write to " + path.string() + " failed");
}

Document load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MlError("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  Document doc = Document::parse(line, nullptr, false);
  if (doc.is_discarded()) throw MlError(path.string() + ":1: malformed model");
  return doc;
}

}  // namespace doa::ml
