#include "doa/sim/scenario.hpp"

#include <stdexcept>

namespace doa::sim {

using apps::AppId;

Document default_params(AppId app) {
  switch (app) {
    case AppId::RideAllocation:
      return {{"drivers", 20},       {"request_rate", 0.6}, {"area", 10.0},
              {"layout", "plane"},   {"noise", 1.0},        {"wait_slope", 2.0},
              {"wait_intercept", 1.0}, {"trip_min", 1},     {"trip_max", 4}};
    case AppId::MBlogger:
      return {{"users", 12},         {"follow_rate", 1.0}, {"post_rate", 2.0},
              {"timeline_rate", 1.5}, {"bot_user", 0},      {"min_words", 2},
              {"max_words", 6}};
    case AppId::InsuranceClaims:
      return {{"claim_rate", 3.0}, {"flag_prob", 0.08}};
    case AppId::PlaylistBuilder:
      return {{"initial_movies", 20}, {"movie_rate", 0.5}, {"request_rate", 1.0}, {"k_max", 5}};
  }
  return Document::object();
}

Scenario Scenario::make(AppId app, std::uint64_t seed, Tick ticks, const Document& overrides) {
  if (ticks < 0) throw std::invalid_argument("ticks must be >= 0");
  Scenario s{app, seed, ticks, default_params(app)};
  if (!overrides.is_null() && !overrides.is_object()) {
    throw std::invalid_argument("scenario parameters must be a JSON object");
  }
  if (overrides.is_object()) {
    for (const auto& [k, v] : overrides.items()) {
      if (!s.params.contains(k)) {
        throw std::invalid_argument("unknown scenario parameter '" + k + "' for " +
                                    std::string(apps::to_string(app)));
      }
      s.params[k] = v;
    }
  }
  return s;
}

Document Scenario::to_json() const {
  return {{"app", apps::to_string(app)}, {"params", params}, {"seed", seed}, {"ticks", ticks}};
}

std::unique_ptr<World> make_world(const Scenario& scenario) {
  switch (scenario.app) {
    case AppId::RideAllocation: return make_ride_world(scenario);
    case AppId::MBlogger: return make_mblogger_world(scenario);
    case AppId::InsuranceClaims: return make_claims_world(scenario);
    case AppId::PlaylistBuilder: return make_playlist_world(scenario);
  }
  throw std::invalid_argument("unknown app");
}

}  // namespace doa::sim
