#include <gtest/gtest.h>

#include "doa/sim/run.hpp"

namespace doa::sim {
namespace {

using apps::AppId;
using apps::Paradigm;
using apps::Stage;

TEST(Scenario, OverridesMergeIntoDefaults) {
  const auto s = Scenario::make(AppId::RideAllocation, 4, 30, {{"drivers", 3}});
  EXPECT_EQ(s.param<Int>("drivers"), 3);
  EXPECT_DOUBLE_EQ(s.param<double>("wait_slope"), 2.0);
  EXPECT_EQ(s.seed, 4u);
  EXPECT_EQ(s.ticks, 30);
  EXPECT_EQ(s.to_json().at("app"), "ride_allocation");
}

TEST(Scenario, RejectsUnknownKeysAndBadInput) {
  EXPECT_THROW(Scenario::make(AppId::MBlogger, 1, 10, {{"drivers", 3}}), std::invalid_argument);
  EXPECT_THROW(Scenario::make(AppId::MBlogger, 1, -1), std::invalid_argument);
  EXPECT_THROW(Scenario::make(AppId::MBlogger, 1, 10, Document::array()), std::invalid_argument);
}

TEST(World, SameSeedSameEvents) {
  for (AppId app : apps::kAllApps) {
    const auto s = Scenario::make(app, 9, 20);
    auto a = make_world(s), b = make_world(s);
    Rng ra(1), rb(1);
    for (Tick t = 0; t < 20; ++t) {
      const auto ea = a->generate(t, ra);
      EXPECT_EQ(ea, b->generate(t, rb));
      for (const auto& e : ea) EXPECT_EQ(e.tick, t);
    }
  }
}

TEST(Run, ReportsAreDeterministic) {
  for (AppId app : apps::kAllApps) {
    const auto s = Scenario::make(app, 2, 40);
    for (Paradigm p : apps::kAllParadigms) {
      EXPECT_EQ(run_version(s, p, Stage::Min).report.dump(), run_version(s, p, Stage::Min).report.dump())
          << apps::to_string(app);
    }
  }
}

TEST(Run, ReportDescribesTheRun) {
  const auto s = Scenario::make(AppId::PlaylistBuilder, 5, 30);
  const auto r = run_version(s, Paradigm::Fbp, Stage::Min);
  EXPECT_EQ(r.report.version, "fb_playlist_builder_min");
  EXPECT_EQ(r.report.ticks, 30);
  EXPECT_EQ(r.report.events, r.events.size());
  EXPECT_EQ(r.report.delivered, r.events.size());
  EXPECT_EQ(r.report.digest, business_digest(AppId::PlaylistBuilder, r.outputs));
  const auto& playlists = r.outputs.at("playlists");
  EXPECT_EQ(r.report.channels.at("playlists").count, playlists.size());
  EXPECT_EQ(r.report.channels.at("playlists").digest, channel_digest(playlists));
  const std::string text = r.report.dump();
  EXPECT_EQ(text.back(), '\n');
  EXPECT_EQ(Document::parse(text), r.report.to_json());
}

TEST(Run, ParadigmsAgreeOnBusinessOutputs) {
  for (AppId app : apps::kAllApps) {
    const auto s = Scenario::make(app, 6, 60);
    EXPECT_EQ(run_version(s, Paradigm::Fbp, Stage::Min).report.digest,
              run_version(s, Paradigm::Soa, Stage::Min).report.digest)
        << apps::to_string(app);
  }
}

TEST(Run, DatasetsAgreeAcrossParadigms) {
  for (AppId app : {AppId::RideAllocation, AppId::InsuranceClaims}) {
    const auto s = Scenario::make(app, 8, 60);
    const auto fbp = run_version(s, Paradigm::Fbp, Stage::Data).dataset;
    EXPECT_FALSE(fbp.empty());
    EXPECT_EQ(fbp, run_version(s, Paradigm::Soa, Stage::Data).dataset);
    EXPECT_TRUE(run_version(s, Paradigm::Fbp, Stage::Min).dataset.empty());
  }
}

TEST(Digest, DependsOnContentAndOrder) {
  const std::vector<Document> a = {{{"tick", 0}, {"v", 1}}, {{"tick", 1}, {"v", 2}}};
  const std::vector<Document> b = {a[1], a[0]};
  EXPECT_EQ(channel_digest(a), channel_digest(a));
  EXPECT_NE(channel_digest(a), channel_digest(b));
  EXPECT_EQ(channel_digest({}).size(), 16u);
  apps::ChannelOutputs out{{"playlists", a}, {"noise", b}};
  apps::ChannelOutputs other{{"playlists", a}};
  EXPECT_EQ(business_digest(AppId::PlaylistBuilder, out), business_digest(AppId::PlaylistBuilder, other));
}

TEST(Training, ModelsFitFromDataStage) {
  const auto ride = train_models(Scenario::make(AppId::RideAllocation, 1, 100), Paradigm::Fbp);
  ASSERT_TRUE(ride.wait_time.has_value());
  EXPECT_FALSE(ride.claim_router.has_value());
  const auto claims = train_models(Scenario::make(AppId::InsuranceClaims, 1, 100), Paradigm::Soa);
  ASSERT_TRUE(claims.claim_router.has_value());
  const auto none = train_models(Scenario::make(AppId::MBlogger, 1, 10), Paradigm::Fbp);
  EXPECT_FALSE(none.wait_time || none.claim_router);
}

}  // namespace
}  // namespace doa::sim
