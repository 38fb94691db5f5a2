#pragma once

#include <map>
#include <string>
#include <vector>

#include "doa/sim/host.hpp"
#include "doa/sim/scenario.hpp"

namespace doa::sim {

struct ChannelSummary {
  std::size_t count = 0;
  std::string digest;
};

struct RunReport {
  std::string version;
  std::string app;
  std::string paradigm;
  std::string stage;
  std::uint64_t seed = 0;
  Tick ticks = 0;
  std::size_t events = 0;
  std::size_t delivered = 0;
  Document counts = Document::object();
  std::map<std::string, ChannelSummary> channels;
  /// Digest over the app's business channels only.
  std::string digest;

  Document to_json() const;
  /// Canonical JSON text (sorted keys, two-space indent, trailing newline).
  std::string dump() const;
};

struct RunResult {
  RunReport report;
  apps::ChannelOutputs outputs;
  std::vector<Event> events;
  std::vector<DatasetRow> dataset;
};

/// FNV-1a over the canonical JSON line of every document.
std::string channel_digest(const std::vector<Document>& docs);
std::string business_digest(apps::AppId app, const apps::ChannelOutputs& outputs);

/// Per tick: generate events, deliver each once, finish the tick, let the world
/// observe the outputs. Failures are rethrown as RuntimeError naming the tick.
RunResult run_scenario(const Scenario& scenario, AppHost& host, apps::Paradigm paradigm,
                       apps::Stage stage);

/// Builds the version and runs it. Ml stages that load a model and receive
/// none are trained first on a data-stage run of the same scenario.
RunResult run_version(const Scenario& scenario, apps::Paradigm paradigm, apps::Stage stage,
                      std::optional<apps::Models> models = std::nullopt);

/// Runs the data stage of `scenario` and fits the app's ml-stage models.
apps::Models train_models(const Scenario& scenario, apps::Paradigm paradigm);

apps::BuildOptions build_options(const Scenario& scenario, apps::Models models = {});

}  // namespace doa::sim
