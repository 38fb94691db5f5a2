#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "doa/collection/collection.hpp"
#include "doa/graph/flow_graph.hpp"
#include "doa/metrics/manifest.hpp"
#include "doa/ml/ml.hpp"
#include "doa/soa/registry.hpp"

namespace doa {

/// Something that happens in the simulated world. `kind` names the FBP input
/// stream the event is injected into; the payload carries that stream's fields.
struct Event {
  Tick tick = 0;
  std::string kind;
  Document payload;

  bool operator==(const Event&) const = default;
};

}  // namespace doa

namespace doa::apps {

enum class AppId { RideAllocation, MBlogger, InsuranceClaims, PlaylistBuilder };
enum class Paradigm { Fbp, Soa };
enum class Stage { Min, Data, Ml };

inline constexpr std::array kAllApps = {AppId::RideAllocation, AppId::MBlogger,
                                        AppId::InsuranceClaims, AppId::PlaylistBuilder};
inline constexpr std::array kAllStages = {Stage::Min, Stage::Data, Stage::Ml};
inline constexpr std::array kAllParadigms = {Paradigm::Fbp, Paradigm::Soa};

std::string_view to_string(AppId app);
std::string_view to_string(Paradigm paradigm);
std::string_view to_string(Stage stage);
std::optional<AppId> parse_app(std::string_view text);
std::optional<Paradigm> parse_paradigm(std::string_view text);
std::optional<Stage> parse_stage(std::string_view text);

/// e.g. "fb_ride_allocation_min", "soa_playlist_builder_ml".
std::string version_key(AppId app, Paradigm paradigm, Stage stage);

/// Observable documents per channel. Each document carries a "tick" field.
using ChannelOutputs = std::map<std::string, std::vector<Document>>;

struct Models {
  std::optional<ml::LinearModel> wait_time;
  std::optional<ml::TreeModel> claim_router;
};

struct BuildOptions {
  Models models;
  /// MBlogger user the bot posts for.
  Int bot_user = 0;
};

struct FbpApp {
  FlowGraph graph;
  /// Streams read back by the simulation after every step.
  std::vector<std::string> channels;
  std::optional<CollectionSpec> collection;
};

struct SoaApp {
  std::vector<soa::ServiceSpec> services;
  std::vector<std::string> channels;
  /// Turns one world event into API calls and records what the world sees.
  std::function<void(soa::Registry&, const Event&, ChannelOutputs&)> deliver;
  /// Runs once per tick after every event was delivered. May be empty.
  std::function<void(soa::Registry&, Tick, std::uint64_t seed, ChannelOutputs&)> end_tick;
  /// Offline dataset accumulated by the services. Empty when the stage has none.
  std::function<std::vector<DatasetRow>(soa::Registry&)> export_dataset;
};

/// Throws std::invalid_argument for combinations that do not exist.
FbpApp build_fbp(AppId app, Stage stage, const BuildOptions& options = {});
SoaApp build_soa(AppId app, Stage stage, const BuildOptions& options = {});

metrics::ComponentManifest manifest(AppId app, Paradigm paradigm, Stage stage);

/// Channels whose contents define the business outcome of a run; both
/// paradigms expose them under the same names.
std::vector<std::string> business_channels(AppId app);

/// Ride allocation and insurance claims write an offline dataset at stage data.
bool has_offline_dataset(AppId app);

}  // namespace doa::apps
