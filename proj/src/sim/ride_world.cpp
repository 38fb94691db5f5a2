#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "doa/apps/ride_allocation.hpp"
#include "doa/sim/scenario.hpp"

namespace doa::sim {

namespace {

class RideWorld final : public World {
 public:
  explicit RideWorld(const Scenario& s)
      : drivers_(s.param<Int>("drivers")),
        rate_(s.param<double>("request_rate")),
        area_(s.param<double>("area")),
        line_(s.param<std::string>("layout") == "line"),
        noise_(s.param<double>("noise")),
        slope_(s.param<double>("wait_slope")),
        intercept_(s.param<double>("wait_intercept")),
        trip_min_(s.param<Int>("trip_min")),
        trip_max_(s.param<Int>("trip_max")) {
    const auto layout = s.param<std::string>("layout");
    if (layout != "line" && layout != "plane") {
      throw std::invalid_argument("layout must be 'plane' or 'line'");
    }
    if (trip_min_ < 0 || trip_max_ < trip_min_) throw std::invalid_argument("bad trip range");
  }

  std::vector<Event> generate(Tick tick, Rng& rng) override {
    std::vector<Event> events;
    if (tick == 0) {
      for (Int id = 0; id < drivers_; ++id) {
        const auto [x, y] = point(rng);
        driver_pos_[id] = {x, y};
        events.push_back({tick, "driver_updates",
                          {{"available", true}, {"driver_id", id}, {"x", x}, {"y", y}}});
      }
    }
    auto due = pending_.find(tick);
    if (due != pending_.end()) {
      std::stable_sort(due->second.begin(), due->second.end(), [](const Event& a, const Event& b) {
        return a.kind == "driver_updates" && b.kind != "driver_updates";
      });
      for (Event& ev : due->second) {
        if (ev.kind == "driver_updates") {
          driver_pos_[ev.payload.at("driver_id").get<Int>()] = {
              ev.payload.at("x").get<double>(), ev.payload.at("y").get<double>()};
        }
        events.push_back(std::move(ev));
      }
      pending_.erase(due);
    }
    const Int n = rng.poisson(rate_);
    for (Int i = 0; i < n; ++i) {
      const Int id = next_ride_++;
      const auto [x, y] = point(rng);
      requests_[id] = {x, y};
      events.push_back(
          {tick, "ride_requests", {{"hour", tick % 24}, {"ride_id", id}, {"x", x}, {"y", y}}});
    }
    return events;
  }

  /// Schedules a pickup base_wait + noise ticks after each allocation, then a
  /// trip-completion update that frees the driver at the drop-off point.
  void observe(Tick tick, const apps::ChannelOutputs& outputs, Rng& rng) override {
    auto it = outputs.find("allocations");
    if (it == outputs.end()) return;
    for (const Document& a : it->second) {
      const Int driver = a.at("driver_id").get<Int>();
      if (driver < 0) continue;
      const Int ride = a.at("ride_id").get<Int>();
      const auto [rx, ry] = requests_.at(ride);
      const auto [dx, dy] = driver_pos_.at(driver);
      const double d = apps::ride::distance(rx, ry, dx, dy);
      const double noise = noise_ > 0.0 ? rng.uniform(-noise_, noise_) : 0.0;
      const Int wait = std::max<Int>(1, std::llround(slope_ * d + intercept_ + noise));
      const Tick pickup_tick = tick + wait;
      const Tick done_tick = pickup_tick + rng.between(trip_min_, trip_max_);
      const auto [x, y] = point(rng);
      pending_[pickup_tick].push_back(
          {pickup_tick, "pickups", {{"driver_id", driver}, {"ride_id", ride}}});
      pending_[done_tick].push_back(
          {done_tick, "driver_updates", {{"available", true}, {"driver_id", driver}, {"x", x}, {"y", y}}});
    }
  }

 private:
  std::pair<double, double> point(Rng& rng) {
    if (line_) return {static_cast<double>(rng.between(0, static_cast<Int>(area_))), 0.0};
    return {rng.uniform(0.0, area_), rng.uniform(0.0, area_)};
  }

  Int drivers_;
  double rate_;
  double area_;
  bool line_;
  double noise_;
  double slope_;
  double intercept_;
  Int trip_min_;
  Int trip_max_;
  Int next_ride_ = 0;
  std::map<Int, std::pair<double, double>> driver_pos_;
  std::map<Int, std::pair<double, double>> requests_;
  std::map<Tick, std::vector<Event>> pending_;
};

}  // namespace

std::unique_ptr<World> make_ride_world(const Scenario& scenario) {
  return std::make_unique<RideWorld>(scenario);
}

}  // namespace doa::sim
