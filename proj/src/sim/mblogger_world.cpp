#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "doa/sim/scenario.hpp"

namespace doa::sim {

namespace {

const std::vector<std::vector<std::string>> kTopics = {
    {"coffee", "espresso", "morning", "beans", "roast", "cup"},
    {"match", "goal", "team", "league", "coach", "win"},
    {"code", "bug", "compiler", "release", "build", "test"},
    {"trail", "summit", "rain", "camp", "river", "map"},
};

class MBloggerWorld final : public World {
 public:
  explicit MBloggerWorld(const Scenario& s)
      : users_(s.param<Int>("users")),
        follow_rate_(s.param<double>("follow_rate")),
        post_rate_(s.param<double>("post_rate")),
        timeline_rate_(s.param<double>("timeline_rate")),
        min_words_(s.param<Int>("min_words")),
        max_words_(s.param<Int>("max_words")) {
    if (min_words_ < 1 || max_words_ < min_words_) throw std::invalid_argument("bad word range");
  }

  std::vector<Event> generate(Tick tick, Rng& rng) override {
    std::vector<Event> events;
    if (users_ <= 0) return events;
    const Int follows = rng.poisson(follow_rate_);
    for (Int i = 0; i < follows; ++i) {
      const Int a = rng.between(0, users_ - 1);
      const Int b = rng.between(0, users_ - 1);
      if (a == b || !edges_.insert({a, b}).second) continue;
      events.push_back({tick, "follows", {{"followee", b}, {"follower", a}}});
    }
    const Int posts = rng.poisson(post_rate_);
    for (Int i = 0; i < posts; ++i) {
      const Int author = rng.between(0, users_ - 1);
      events.push_back({tick, "posts",
                        {{"author", author}, {"post_id", next_post_++}, {"text", text(author, rng)}}});
    }
    const Int requests = rng.poisson(timeline_rate_);
    for (Int i = 0; i < requests; ++i) {
      events.push_back({tick, "timeline_requests",
                        {{"request_id", next_request_++}, {"user_id", rng.between(0, users_ - 1)}}});
    }
    return events;
  }

 private:
  /// Mostly words from the author's topic, sometimes from any topic.
  std::string text(Int author, Rng& rng) {
    const auto& own = kTopics[static_cast<std::size_t>(author) % kTopics.size()];
    const Int n = rng.between(min_words_, max_words_);
    std::string out;
    for (Int i = 0; i < n; ++i) {
      const auto& topic = rng.chance(0.8) ? own : kTopics[rng.below(kTopics.size())];
      if (i) out += ' ';
      out += topic[rng.below(topic.size())];
    }
    return out;
  }

  Int users_;
  double follow_rate_;
  double post_rate_;
  double timeline_rate_;
  Int min_words_;
  Int max_words_;
  Int next_post_ = 0;
  Int next_request_ = 0;
  std::set<std::pair<Int, Int>> edges_;
};

}  // namespace

std::unique_ptr<World> make_mblogger_world(const Scenario& scenario) {
  return std::make_unique<MBloggerWorld>(scenario);
}

}  // namespace doa::sim
