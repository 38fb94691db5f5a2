#include <gtest/gtest.h>

#include <algorithm>

#include "doa/apps/insurance_claims.hpp"
#include "doa/apps/mblogger.hpp"
#include "doa/apps/playlist_builder.hpp"
#include "doa/apps/ride_allocation.hpp"
#include "doa/apps/training.hpp"
#include "doa/graph/validate.hpp"
#include "doa/sim/run.hpp"

namespace doa::apps {
namespace {

TEST(Ride, NearestAvailableDriverWins) {
  const std::vector<ride::Driver> drivers = {
      {1, 5.0, 0.0, true}, {2, 1.0, 0.0, false}, {3, 2.0, 0.0, true}, {4, 9.0, 9.0, true}};
  const auto a = ride::allocate({10, 0.0, 0.0}, drivers);
  EXPECT_EQ(a.ride_id, 10);
  EXPECT_EQ(a.driver_id, 3);
  EXPECT_DOUBLE_EQ(a.distance, 2.0);
  EXPECT_EQ(a.available_drivers, 3);
}

TEST(Ride, TiesGoToLowestIdWhateverTheOrder) {
  std::vector<ride::Driver> drivers = {{7, 0.0, 3.0}, {4, 3.0, 0.0}, {9, -3.0, 0.0}};
  do {
    EXPECT_EQ(ride::allocate({1, 0.0, 0.0}, drivers).driver_id, 4);
  } while (std::next_permutation(drivers.begin(), drivers.end(),
                                 [](const auto& a, const auto& b) { return a.driver_id < b.driver_id; }));
}

TEST(Ride, NoDriverLeavesRideUnmatched) {
  const auto a = ride::allocate({3, 1.0, 1.0}, {{1, 0.0, 0.0, false}});
  EXPECT_FALSE(a.matched());
  EXPECT_EQ(a.driver_id, -1);
  EXPECT_EQ(a.available_drivers, 0);
  EXPECT_FALSE(ride::allocate({3, 1.0, 1.0}, {}).matched());
}

TEST(Ride, WaitFeaturesFollowColumnOrder) {
  EXPECT_EQ(ride::wait_features(2.5, 7, 3), (std::vector<double>{2.5, 7.0, 3.0}));
  EXPECT_EQ(ride::kWaitFeatures.size(), 3u);
}

TEST(Claims, RuleChainExamples) {
  using claims::Claim;
  EXPECT_EQ(claims::claim_route({1, "auto", 500, 0, false}), "fast_track");
  EXPECT_EQ(claims::claim_route({2, "auto", 500, 0, true}), "reject");
  EXPECT_EQ(claims::claim_route({3, "home", 20000, 0, true}), "reject");
  EXPECT_EQ(claims::claim_route({4, "home", 20000, 0, false}), "manual_review");
  EXPECT_EQ(claims::claim_route({5, "auto", 1000, 2, false}), "fast_track");
  EXPECT_EQ(claims::claim_route({6, "auto", 1000.5, 2, false}), "standard");
  EXPECT_EQ(claims::claim_route({7, "auto", 800, 3, false}), "standard");
  EXPECT_EQ(claims::claim_route({8, "health", 800, 0, false}), "standard");
  EXPECT_EQ(claims::claim_route({9, "auto", 10000, 0, false}), "standard");
  EXPECT_THROW(claims::claim_route({10, "boat", 1, 0, false}), std::invalid_argument);
  EXPECT_THROW(claims::claim_route({11, "auto", -1, 0, false}), std::invalid_argument);
}

TEST(Claims, Payouts) {
  EXPECT_FALSE(claims::payout_for("reject", 100).has_value());
  const auto p = claims::payout_for("standard", 1000);
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(p->process, "standard");
  EXPECT_DOUBLE_EQ(p->amount, 900);
  EXPECT_DOUBLE_EQ(claims::payout_for("fast_track", 700)->amount, 700);
  EXPECT_DOUBLE_EQ(claims::payout_for("manual_review", 20000)->amount, 16000);
  EXPECT_THROW(claims::payout_for("maybe", 1), std::invalid_argument);
}

TEST(Claims, FeaturesAreOneHotKindThenNumbers) {
  EXPECT_EQ(claims::claim_features({1, "home", 750, 2, true}),
            (std::vector<double>{0, 1, 0, 750, 2, 1}));
  EXPECT_EQ(claims::claim_features({1, "health", 10, 0, false}),
            (std::vector<double>{0, 0, 1, 10, 0, 0}));
}

TEST(Claims, TreeTrainedOnCollectedDataReproducesTheRules) {
  const auto scenario = sim::Scenario::make(AppId::InsuranceClaims, 3, 100);
  const auto rows = sim::run_version(scenario, Paradigm::Fbp, Stage::Data).dataset;
  ASSERT_GT(rows.size(), 100u);
  const auto model = fit_claim_model(rows);
  EXPECT_LE(model.depth(), kClaimTreeDepth);
  for (const auto& row : rows) {
    const auto c = claim_from_row(row);
    EXPECT_EQ(ml::predict_tree(model, claims::claim_features(c)), claims::claim_route(c));
  }
}

TEST(MBlogger, TimelineRespectsFollowTime) {
  using mblogger::Follow;
  using mblogger::Post;
  const std::vector<Follow> follows = {{1, 2, 5}, {1, 3, 0}, {4, 2, 0}};
  const std::vector<Post> posts = {{10, 2, "early", 3}, {11, 2, "late", 6}, {12, 3, "x", 6},
                                   {13, 1, "own", 7},   {14, 3, "y", 2}};
  EXPECT_EQ(mblogger::timeline(1, follows, posts), (std::vector<Int>{12, 11, 14}));
  EXPECT_EQ(mblogger::timeline(1, follows, posts, 2), (std::vector<Int>{12, 11}));
  EXPECT_EQ(mblogger::timeline(4, follows, posts), (std::vector<Int>{11, 10}));
  EXPECT_TRUE(mblogger::timeline(9, follows, posts).empty());
}

TEST(MBlogger, FollowersAsOfTick) {
  const std::vector<mblogger::Follow> follows = {{5, 1, 4}, {3, 1, 2}, {3, 1, 9}, {8, 2, 0}};
  EXPECT_EQ(mblogger::followers_at(1, 3, follows), (std::vector<Int>{3}));
  EXPECT_EQ(mblogger::followers_at(1, 4, follows), (std::vector<Int>{3, 5}));
  EXPECT_TRUE(mblogger::followers_at(1, 1, follows).empty());
  EXPECT_EQ(mblogger::join_ids({12, 7, 3}), "12,7,3");
  EXPECT_EQ(mblogger::join_ids({}), "");
}

TEST(MBlogger, BotPostsComeFromTheCorpus) {
  EXPECT_EQ(mblogger::bot_post({"hello world"}, 17), "hello world");
  EXPECT_EQ(mblogger::bot_post({"a b", "a c"}, 5), mblogger::bot_post({"a b", "a c"}, 5));
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto post = mblogger::bot_post({"a b", "a c"}, s);
    EXPECT_TRUE(post == "a b" || post == "a c") << post;
  }
  EXPECT_NE(mblogger::bot_seed(1, 2, 3), mblogger::bot_seed(1, 3, 2));
}

TEST(Playlist, SampleWithoutReplacementWithinGenre) {
  std::vector<playlist::Movie> movies;
  for (int i = 0; i < 10; ++i) {
    movies.push_back({"m" + std::to_string(i), i % 2 ? "drama" : "comedy", 10.0 * i});
  }
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto titles = playlist::build_playlist("drama", movies, 3, seed);
    ASSERT_EQ(titles.size(), 3u);
    std::sort(titles.begin(), titles.end());
    EXPECT_EQ(std::adjacent_find(titles.begin(), titles.end()), titles.end());
    for (const auto& t : titles) EXPECT_EQ((t.back() - '0') % 2, 1) << t;
  }
  EXPECT_EQ(playlist::build_playlist("drama", movies, 9, 1).size(), 5u);
  EXPECT_TRUE(playlist::build_playlist("horror", movies, 3, 1).empty());
  EXPECT_EQ(playlist::build_playlist("drama", movies, 3, 8), playlist::build_playlist("drama", movies, 3, 8));
  EXPECT_THROW(playlist::build_playlist("drama", movies, 0, 1), std::invalid_argument);
}

TEST(Playlist, GrossFloorFilters) {
  const std::vector<playlist::Movie> movies = {{"a", "g", 1}, {"b", "g", 5}, {"c", "g", 9}};
  auto titles = playlist::build_playlist("g", movies, 5, 3, 5.0);
  std::sort(titles.begin(), titles.end());
  EXPECT_EQ(titles, (std::vector<std::string>{"b", "c"}));
  EXPECT_EQ(playlist::join_titles({"a", "b", "c"}), "a|b|c");
}

TEST(Catalog, NamesRoundTrip) {
  for (AppId a : kAllApps) EXPECT_EQ(parse_app(to_string(a)), a);
  for (Stage s : kAllStages) EXPECT_EQ(parse_stage(to_string(s)), s);
  for (Paradigm p : kAllParadigms) EXPECT_EQ(parse_paradigm(to_string(p)), p);
  EXPECT_FALSE(parse_app("nope").has_value());
  EXPECT_EQ(version_key(AppId::RideAllocation, Paradigm::Fbp, Stage::Min), "fb_ride_allocation_min");
  EXPECT_EQ(version_key(AppId::PlaylistBuilder, Paradigm::Soa, Stage::Ml), "soa_playlist_builder_ml");
}

TEST(Catalog, EveryFbpVersionValidatesAndExposesItsChannels) {
  for (AppId a : kAllApps) {
    for (Stage s : kAllStages) {
      const auto app = build_fbp(a, s);
      const auto report = validate(app.graph);
      EXPECT_TRUE(report.ok()) << version_key(a, Paradigm::Fbp, s) << "\n" << report.summary();
      for (const auto& ch : business_channels(a)) {
        EXPECT_NE(std::find(app.channels.begin(), app.channels.end(), ch), app.channels.end());
      }
      EXPECT_EQ(app.collection.has_value(), s != Stage::Min && has_offline_dataset(a));
    }
  }
}

TEST(Catalog, EverySoaVersionRegisters) {
  for (AppId a : kAllApps) {
    for (Stage s : kAllStages) {
      const auto app = build_soa(a, s);
      soa::Registry reg;
      for (auto spec : app.services) EXPECT_NO_THROW(reg.register_service(std::move(spec)));
      EXPECT_FALSE(reg.services().empty());
      for (const auto& ch : business_channels(a)) {
        EXPECT_NE(std::find(app.channels.begin(), app.channels.end(), ch), app.channels.end());
      }
    }
  }
}

}  // namespace
}  // namespace doa::apps
