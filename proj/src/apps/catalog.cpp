#include <stdexcept>

#include "doa/apps/app.hpp"
#include "doa/apps/insurance_claims.hpp"
#include "doa/apps/mblogger.hpp"
#include "doa/apps/playlist_builder.hpp"
#include "doa/apps/ride_allocation.hpp"

namespace doa::apps {

std::string_view to_string(AppId app) {
  switch (app) {
    case AppId::RideAllocation: return "ride_allocation";
    case AppId::MBlogger: return "mblogger";
    case AppId::InsuranceClaims: return "insurance_claims";
    case AppId::PlaylistBuilder: return "playlist_builder";
  }
  return "?";
}

std::string_view to_string(Paradigm paradigm) {
  return paradigm == Paradigm::Fbp ? "fbp" : "soa";
}

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::Min: return "min";
    case Stage::Data: return "data";
    case Stage::Ml: return "ml";
  }
  return "?";
}

std::optional<AppId> parse_app(std::string_view text) {
  for (AppId a : kAllApps) {
    if (to_string(a) == text) return a;
  }
  return std::nullopt;
}

std::optional<Paradigm> parse_paradigm(std::string_view text) {
  for (Paradigm p : kAllParadigms) {
    if (to_string(p) == text) return p;
  }
  return std::nullopt;
}

std::optional<Stage> parse_stage(std::string_view text) {
  for (Stage s : kAllStages) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

std::string version_key(AppId app, Paradigm paradigm, Stage stage) {
  return std::string(paradigm == Paradigm::Fbp ? "fb" : "soa") + "_" + std::string(to_string(app)) +
         "_" + std::string(to_string(stage));
}

FbpApp build_fbp(AppId app, Stage stage, const BuildOptions& options) {
  switch (app) {
    case AppId::RideAllocation: return ride::build_fbp(stage, options);
    case AppId::MBlogger: return mblogger::build_fbp(stage, options);
    case AppId::InsuranceClaims: return claims::build_fbp(stage, options);
    case AppId::PlaylistBuilder: return playlist::build_fbp(stage, options);
  }
  throw std::invalid_argument("unknown app");
}

SoaApp build_soa(AppId app, Stage stage, const BuildOptions& options) {
  switch (app) {
    case AppId::RideAllocation: return ride::build_soa(stage, options);
    case AppId::MBlogger: return mblogger::build_soa(stage, options);
    case AppId::InsuranceClaims: return claims::build_soa(stage, options);
    case AppId::PlaylistBuilder: return playlist::build_soa(stage, options);
  }
  throw std::invalid_argument("unknown app");
}

metrics::ComponentManifest manifest(AppId app, Paradigm paradigm, Stage stage) {
  const std::string key = version_key(app, paradigm, stage);
  if (paradigm == Paradigm::Fbp) return metrics::manifest_of(build_fbp(app, stage).graph, key);
  return metrics::manifest_of(build_soa(app, stage).services, key);
}

std::vector<std::string> business_channels(AppId app) {
  switch (app) {
    case AppId::RideAllocation: return {"allocations"};
    case AppId::MBlogger: return {"timelines"};
    case AppId::InsuranceClaims: return {"decisions", "payouts"};
    case AppId::PlaylistBuilder: return {"playlists"};
  }
  return {};
}

bool has_offline_dataset(AppId app) {
  return app == AppId::RideAllocation || app == AppId::InsuranceClaims;
}

}  // namespace doa::apps
