#include <sstream>

#include "doa/ml/ml.hpp"

namespace doa::ml {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::istringstream in{std::string(text)};
  std::string t;
  while (in >> t) tokens.push_back(t);
  return tokens;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

BigramModel fit_bigram(std::span<const std::vector<std::string>> documents) {
  BigramModel model;
  for (const auto& doc : documents) {
    if (doc.empty()) continue;
    std::string prev = kStartToken;
    for (const auto& token : doc) {
      ++model.counts[prev][token];
      model.vocabulary.insert(token);
      prev = token;
    }
    ++model.counts[prev][kEndToken];
  }
  return model;
}

std::vector<std::string> generate(const BigramModel& model, Rng& rng, std::size_t max_len) {
  std::vector<std::string> out;
  std::string current = kStartToken;
  while (out.size() < max_len) {
    auto it = model.counts.find(current);
    if (it == model.counts.end() || it->second.empty()) break;
    std::uint64_t total = 0;
    for (const auto& [next, c] : it->second) total += c;
    if (total == 0) break;
    std::uint64_t r = rng.below(total);
    const std::string* chosen = nullptr;
    for (const auto& [next, c] : it->second) {
      if (r < c) {
        chosen = &next;
        break;
      }
      r -= c;
    }
    if (*chosen == kEndToken) break;
    out.push_back(*chosen);
    current = *chosen;
  }
  return out;
}

}  // namespace doa::ml
