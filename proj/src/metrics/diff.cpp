#include <algorithm>
#include <sstream>

#include "doa/metrics/manifest.hpp"

namespace doa::metrics {

ComponentDiff diff(const ComponentManifest& a, const ComponentManifest& b) {
  ComponentDiff d;
  for (const auto& [id, fp] : a.components) {
    auto it = b.components.find(id);
    if (it == b.components.end()) {
      d.removed.insert(id);
    } else if (it->second != fp) {
      d.changed.insert(id);
    }
  }
  for (const auto& [id, fp] : b.components) {
    if (!a.components.count(id)) d.added.insert(id);
  }
  return d;
}

std::string format_diff(const ComponentDiff& d) {
  std::vector<std::pair<std::string, std::string>> rows;
  for (const auto& id : d.added) rows.emplace_back(id, "added");
  for (const auto& id : d.removed) rows.emplace_back(id, "removed");
  for (const auto& id : d.changed) rows.emplace_back(id, "changed");
  std::sort(rows.begin(), rows.end());

  std::size_t width = std::string("component").size();
  for (const auto& r : rows) width = std::max(width, r.first.size());

  std::ostringstream out;
  auto line = [&](const std::string& a, const std::string& b) {
    out << a << std::string(width - a.size() + 2, ' ') << b << '\n';
  };
  line("component", "change");
  for (const auto& [id, change] : rows) line(id, change);
  out << "affected_count " << d.affected_count() << '\n';
  return out.str();
}

}  // namespace doa::metrics
