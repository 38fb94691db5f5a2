#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "doa/apps/app.hpp"
#include "doa/core/rng.hpp"

namespace doa::sim {

/// Generator parameters for one app with every default filled in.
Document default_params(apps::AppId app);

struct Scenario {
  apps::AppId app = apps::AppId::RideAllocation;
  std::uint64_t seed = 1;
  Tick ticks = 100;
  Document params = Document::object();

  /// Overrides are merged into the app defaults; unknown keys throw
  /// std::invalid_argument.
  static Scenario make(apps::AppId app, std::uint64_t seed, Tick ticks,
                       const Document& overrides = Document::object());

  template <class T>
  T param(const char* name) const {
    return params.at(name).get<T>();
  }

  Document to_json() const;
};

/// The simulated outside world of one app.
class World {
 public:
  virtual ~World() = default;
  /// Events for `tick`: reactive ones scheduled earlier, then exogenous ones.
  virtual std::vector<Event> generate(Tick tick, Rng& rng) = 0;
  /// Sees what the application produced during `tick`.
  virtual void observe(Tick /*tick*/, const apps::ChannelOutputs& /*outputs*/, Rng& /*rng*/) {}
};

std::unique_ptr<World> make_world(const Scenario& scenario);

std::unique_ptr<World> make_ride_world(const Scenario& scenario);
std::unique_ptr<World> make_mblogger_world(const Scenario& scenario);
std::unique_ptr<World> make_claims_world(const Scenario& scenario);
std::unique_ptr<World> make_playlist_world(const Scenario& scenario);

}  // namespace doa::sim
