#include <string>
#include <vector>

#include "doa/sim/scenario.hpp"

namespace doa::sim {

namespace {

const std::vector<std::string> kGenres = {"action", "comedy", "drama", "horror", "scifi"};

class PlaylistWorld final : public World {
 public:
  explicit PlaylistWorld(const Scenario& s)
      : initial_(s.param<Int>("initial_movies")),
        movie_rate_(s.param<double>("movie_rate")),
        request_rate_(s.param<double>("request_rate")),
        k_max_(s.param<Int>("k_max")) {}

  std::vector<Event> generate(Tick tick, Rng& rng) override {
    std::vector<Event> events;
    const Int movies = (tick == 0 ? initial_ : 0) + rng.poisson(movie_rate_);
    for (Int i = 0; i < movies; ++i) {
      events.push_back({tick, "movies",
                        {{"genre", kGenres[rng.below(kGenres.size())]},
                         {"gross", static_cast<double>(rng.between(10, 900))},
                         {"title", "movie-" + std::to_string(next_movie_++)}}});
    }
    const Int requests = rng.poisson(request_rate_);
    for (Int i = 0; i < requests; ++i) {
      events.push_back({tick, "playlist_requests",
                        {{"genre", kGenres[rng.below(kGenres.size())]},
                         {"k", rng.between(1, k_max_)},
                         {"request_id", next_request_++},
                         {"seed", static_cast<Int>(rng.next() >> 33)}}});
    }
    return events;
  }

 private:
  Int initial_;
  double movie_rate_;
  double request_rate_;
  Int k_max_;
  Int next_movie_ = 0;
  Int next_request_ = 0;
};

}  // namespace

std::unique_ptr<World> make_playlist_world(const Scenario& scenario) {
  return std::make_unique<PlaylistWorld>(scenario);
}

}  // namespace doa::sim
