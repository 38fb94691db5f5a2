#include "doa/apps/mblogger.hpp"

#include <algorithm>
#include <set>

#include "common.hpp"

namespace doa::apps::mblogger {

using namespace detail;

std::vector<Int> timeline(Int user, const std::vector<Follow>& follows,
                          const std::vector<Post>& posts, std::size_t limit) {
  std::map<Int, Tick> since;
  for (const Follow& f : follows) {
    if (f.follower != user) continue;
    auto [it, fresh] = since.emplace(f.followee, f.tick);
    if (!fresh) it->second = std::min(it->second, f.tick);
  }
  std::vector<const Post*> picked;
  for (const Post& p : posts) {
    auto it = since.find(p.author);
    if (it != since.end() && it->second <= p.tick) picked.push_back(&p);
  }
  std::sort(picked.begin(), picked.end(), [](const Post* a, const Post* b) {
    return a->tick != b->tick ? a->tick > b->tick : a->post_id > b->post_id;
  });
  if (picked.size() > limit) picked.resize(limit);
  std::vector<Int> ids;
  for (const Post* p : picked) ids.push_back(p->post_id);
  return ids;
}

std::vector<Int> followers_at(Int author, Tick tick, const std::vector<Follow>& follows) {
  std::set<Int> out;
  for (const Follow& f : follows) {
    if (f.followee == author && f.tick <= tick) out.insert(f.follower);
  }
  return {out.begin(), out.end()};
}

std::string join_ids(const std::vector<Int>& ids) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(ids[i]);
  }
  return s;
}

std::uint64_t bot_seed(std::uint64_t run_seed, Tick tick, Int user) {
  return mix_seed(run_seed, static_cast<std::uint64_t>(tick), static_cast<std::uint64_t>(user));
}

std::string bot_post(const std::vector<std::string>& corpus, std::uint64_t seed) {
  std::vector<std::vector<std::string>> docs;
  for (const auto& text : corpus) docs.push_back(ml::tokenize(text));
  const ml::BigramModel model = ml::fit_bigram(docs);
  Rng rng(seed);
  return ml::join_tokens(ml::generate(model, rng, kBotMaxLen));
}

namespace {

const Schema kFollow("follow", {{"follower", FieldType::Int}, {"followee", FieldType::Int}});
const Schema kPost("post", {{"post_id", FieldType::Int},
                            {"author", FieldType::Int},
                            {"text", FieldType::Text}});
const Schema kTimelineRequest("timeline_request",
                              {{"request_id", FieldType::Int}, {"user_id", FieldType::Int}});
const Schema kTimeline("timeline", {{"request_id", FieldType::Int},
                                    {"user_id", FieldType::Int},
                                    {"post_ids", FieldType::Text}});
const Schema kCorpusEntry("corpus_entry", {{"user_id", FieldType::Int},
                                           {"post_id", FieldType::Int},
                                           {"text", FieldType::Text}});
const Schema kBotPost("bot_post", {{"user_id", FieldType::Int}, {"text", FieldType::Text}});

std::vector<Follow> follows_of(const PortView& v) {
  std::vector<Follow> out;
  for (const Record& r : v.history) {
    out.push_back({v.get<Int>(r, "follower"), v.get<Int>(r, "followee"), r.tick});
  }
  return out;
}

std::vector<Post> posts_of(const PortView& v) {
  std::vector<Post> out;
  for (const Record& r : v.history) {
    out.push_back({v.get<Int>(r, "post_id"), v.get<Int>(r, "author"),
                   v.get<std::string>(r, "text"), r.tick});
  }
  return out;
}

NodeOutput timeline_builder(const NodeInput& in) {
  const PortView& req = in["requests"];
  NodeOutput out;
  auto& rows = out["timelines"];
  if (req.delta().empty()) return out;
  const auto follows = follows_of(in["follows"]);
  const auto posts = posts_of(in["posts"]);
  for (const Record& r : req.delta()) {
    const Int user = req.get<Int>(r, "user_id");
    rows.push_back({req.get<Int>(r, "request_id"), user, join_ids(timeline(user, follows, posts))});
  }
  return out;
}

NodeOutput interest_collector(const NodeInput& in) {
  const PortView& pv = in["posts"];
  NodeOutput out;
  auto& rows = out["corpus"];
  if (pv.delta().empty()) return out;
  const auto follows = follows_of(in["follows"]);
  for (const Record& r : pv.delta()) {
    for (Int user : followers_at(pv.get<Int>(r, "author"), r.tick, follows)) {
      rows.push_back({user, pv.get<Int>(r, "post_id"), pv.get<std::string>(r, "text")});
    }
  }
  return out;
}

Transform bot(Int target) {
  return [target](const NodeInput& in) {
    const PortView& v = in["corpus"];
    NodeOutput out;
    const auto delta = v.delta();
    const bool grew = std::any_of(delta.begin(), delta.end(), [&](const Record& r) {
      return v.get<Int>(r, "user_id") == target;
    });
    if (!grew) return out;
    std::vector<std::string> corpus;
    for (const Record& r : v.history) {
      if (v.get<Int>(r, "user_id") == target) corpus.push_back(v.get<std::string>(r, "text"));
    }
    out["bot_posts"].push_back(
        {target, bot_post(corpus, bot_seed(in.seed(), in.tick(), target))});
    return out;
  };
}

}  // namespace

FbpApp build_fbp(Stage stage, const BuildOptions& options) {
  FbpApp app;
  FlowGraph& g = app.graph;
  g.add_stream({"follows", StreamCategory::Input, kFollow});
  g.add_stream({"posts", StreamCategory::Input, kPost});
  g.add_stream({"timeline_requests", StreamCategory::Input, kTimelineRequest});
  g.add_stream({"timelines", StreamCategory::Output, kTimeline});
  g.add_node({"timeline_builder",
              {in_port("follows", kFollow), in_port("posts", kPost),
               in_port("requests", kTimelineRequest)},
              {out_port("timelines", kTimeline)},
              timeline_builder,
              "1"},
             {{"follows", "follows"}, {"posts", "posts"}, {"requests", "timeline_requests"}},
             {{"timelines", "timelines"}});
  app.channels = {"timelines"};
  if (stage == Stage::Min) return app;

  g.add_stream({"interest_corpora",
                stage == Stage::Ml ? StreamCategory::Internal : StreamCategory::Output,
                kCorpusEntry});
  g.add_node({"interest_collector",
              {in_port("follows", kFollow), in_port("posts", kPost)},
              {out_port("corpus", kCorpusEntry)},
              interest_collector,
              "1"},
             {{"follows", "follows"}, {"posts", "posts"}}, {{"corpus", "interest_corpora"}});
  if (stage == Stage::Data) {
    app.channels.push_back("interest_corpora");
    return app;
  }

  g.add_stream({"bot_posts", StreamCategory::Output, kBotPost});
  g.add_node({"bot", {in_port("corpus", kCorpusEntry)}, {out_port("bot_posts", kBotPost)},
              bot(options.bot_user), "1"},
             {{"corpus", "interest_corpora"}}, {{"bot_posts", "bot_posts"}});
  app.channels.push_back("bot_posts");
  return app;
}

// ---------------------------------------------------------------------------
// SOA: users, posts and timeline services (plus bot at stage ml)

namespace {

soa::ServiceSpec users_service(Stage stage) {
  soa::ServiceSpec s;
  s.id = "users";
  s.apis.push_back({"follow", sig({"followee", "follower"}, {"followee", "follower"}), "1",
                    [](const Document& req, soa::ServiceContext& ctx) {
                      Document f = req;
                      f["tick"] = ctx.tick();
                      ctx.run("add_follow", f);
                      return req;
                    }});
  s.apis.push_back({"followees", sig({"user_id"}, {"follows"}), "1",
                    [](const Document& req, soa::ServiceContext& ctx) {
                      return ctx.run("select_followees", req);
                    }});
  s.routines.push_back({"add_follow", sig({"followee", "follower", "tick"}, {}), "1",
                        [](soa::Store& st, const Document& args) {
                          st.put("follows",
                                 key_of(field<Int>(args, "follower")) + ":" +
                                     key_of(field<Int>(args, "followee")),
                                 args);
                          return empty();
                        }});
  s.routines.push_back({"select_followees", sig({"user_id"}, {"follows"}), "1",
                        [](soa::Store& st, const Document& args) {
                          const Int user = field<Int>(args, "user_id");
                          Document list = Document::array();
                          for (const auto& [k, f] : st.scan("follows")) {
                            if (field<Int>(f, "follower") == user) list.push_back(f);
                          }
                          return Document{{"follows", list}};
                        }});
  if (stage == Stage::Min) return s;

  s.apis.push_back({"followers", sig({"user_id"}, {"followers"}), "1",
                    [](const Document& req, soa::ServiceContext& ctx) {
                      return ctx.run("select_followers", req);
                    }});
  s.routines.push_back({"select_followers", sig({"user_id"}, {"followers"}), "1",
                        [](soa::Store& st, const Document& args) {
                          const Int user = field<Int>(args, "user_id");
                          std::set<Int> ids;
                          for (const auto& [k, f] : st.scan("follows")) {
                            if (field<Int>(f, "followee") == user) {
                              ids.insert(field<Int>(f, "follower"));
                            }
                          }
                          return Document{{"followers", ids}};
                        }});
  return s;
}

soa::ServiceSpec posts_service(Stage stage) {
  const bool data = stage != Stage::Min;
  soa::ServiceSpec s;
  s.id = "posts";
  s.apis.push_back(
      {"publish", sig({"author", "post_id", "text"}, {"post_id"}), data ? "2" : "1",
       [data](const Document& req, soa::ServiceContext& ctx) {
         Document p = req;
         p["tick"] = ctx.tick();
         ctx.run("add_post", p);
         if (data) {
           const Document f = ctx.call("users", "followers", {{"user_id", req.at("author")}});
           for (const auto& user : f.at("followers")) {
             ctx.run("append_corpus",
                     {{"post_id", req.at("post_id")}, {"text", req.at("text")}, {"user_id", user}});
           }
         }
         return Document{{"post_id", req.at("post_id")}};
       }});
  s.apis.push_back({"by_authors", sig({"authors"}, {"posts"}), "1",
                    [](const Document& req, soa::ServiceContext& ctx) {
                      return ctx.run("select_posts", req);
                    }});
  s.routines.push_back({"add_post", sig({"author", "post_id", "text", "tick"}, {}), "1",
                        [](soa::Store& st, const Document& args) {
                          st.put("posts", key_of(field<Int>(args, "post_id")), args);
                          return empty();
                        }});
  s.routines.push_back({"select_posts", sig({"authors"}, {"posts"}), "1",
                        [](soa::Store& st, const Document& args) {
                          const auto authors = args.at("authors").get<std::set<Int>>();
                          Document list = Document::array();
                          for (const auto& [k, p] : st.scan("posts")) {
                            if (authors.count(field<Int>(p, "author"))) list.push_back(p);
                          }
                          return Document{{"posts", list}};
                        }});
  if (!data) return s;

  s.apis.push_back({"get_corpus", sig({"user_id"}, {"texts"}), "1",
                    [](const Document& req, soa::ServiceContext& ctx) {
                      return ctx.run("select_corpus", req);
                    }});
  s.routines.push_back({"append_corpus", sig({"post_id", "text", "user_id"}, {}), "1",
                        [](soa::Store& st, const Document& args) {
                          st.put("corpus", seq_key(st.size("corpus")), args);
                          return empty();
                        }});
  s.routines.push_back({"select_corpus", sig({"user_id"}, {"texts"}), "1",
                        [](soa::Store& st, const Document& args) {
                          const Int user = field<Int>(args, "user_id");
                          Document texts = Document::array();
                          for (const auto& [k, e] : st.scan("corpus")) {
                            if (field<Int>(e, "user_id") == user) texts.push_back(e.at("text"));
                          }
                          return Document{{"texts", texts}};
                        }});
  return s;
}

soa::ServiceSpec timeline_service() {
  soa::ServiceSpec s;
  s.id = "timeline";
  s.apis.push_back(
      {"get_timeline", sig({"request_id", "user_id"}, {"post_ids", "request_id", "user_id"}), "1",
       [](const Document& req, soa::ServiceContext& ctx) {
         const Int user = field<Int>(req, "user_id");
         std::vector<Follow> follows;
         std::set<Int> authors;
         const Document follows_reply = ctx.call("users", "followees", {{"user_id", user}});
         for (const auto& f : follows_reply.at("follows")) {
           follows.push_back({field<Int>(f, "follower"), field<Int>(f, "followee"),
                              field<Int>(f, "tick")});
           authors.insert(field<Int>(f, "followee"));
         }
         std::vector<Post> posts;
         const Document posts_reply = ctx.call("posts", "by_authors", {{"authors", authors}});
         for (const auto& p : posts_reply.at("posts")) {
           posts.push_back({field<Int>(p, "post_id"), field<Int>(p, "author"),
                            field<std::string>(p, "text"), field<Int>(p, "tick")});
         }
         return Document{{"post_ids", join_ids(timeline(user, follows, posts))},
                         {"request_id", req.at("request_id")},
                         {"user_id", user}};
       }});
  return s;
}

soa::ServiceSpec bot_service() {
  soa::ServiceSpec s;
  s.id = "bot";
  s.apis.push_back(
      {"generate_post", sig({"seed", "tick", "user_id"}, {"generated", "text", "user_id"}), "1",
       [](const Document& req, soa::ServiceContext& ctx) {
         const Int user = field<Int>(req, "user_id");
         const auto texts =
             ctx.call("posts", "get_corpus", {{"user_id", user}}).at("texts").get<std::vector<std::string>>();
         const auto seen = field<std::size_t>(ctx.run("load_seen", {{"user_id", user}}), "count");
         if (texts.size() <= seen) {
           return Document{{"generated", false}, {"text", ""}, {"user_id", user}};
         }
         ctx.run("save_seen", {{"count", texts.size()}, {"user_id", user}});
         const std::string text = bot_post(
             texts, bot_seed(field<std::uint64_t>(req, "seed"), field<Int>(req, "tick"), user));
         ctx.run("save_generated", {{"text", text}, {"tick", req.at("tick")}, {"user_id", user}});
         return Document{{"generated", true}, {"text", text}, {"user_id", user}};
       }});
  s.routines.push_back({"load_seen", sig({"user_id"}, {"count"}), "1",
                        [](soa::Store& st, const Document& args) {
                          const auto row = st.get("seen", key_of(field<Int>(args, "user_id")));
                          return Document{{"count", row ? row->at("count") : Document(0)}};
                        }});
  s.routines.push_back({"save_seen", sig({"count", "user_id"}, {}), "1",
                        [](soa::Store& st, const Document& args) {
                          st.put("seen", key_of(field<Int>(args, "user_id")), args);
                          return empty();
                        }});
  s.routines.push_back({"save_generated", sig({"text", "tick", "user_id"}, {}), "1",
                        [](soa::Store& st, const Document& args) {
                          st.put("generated", seq_key(st.size("generated")), args);
                          return empty();
                        }});
  return s;
}

}  // namespace

SoaApp build_soa(Stage stage, const BuildOptions& options) {
  SoaApp app;
  app.services = {users_service(stage), posts_service(stage), timeline_service()};
  app.channels = {"timelines"};
  app.deliver = [](soa::Registry& reg, const Event& ev, ChannelOutputs& out) {
    if (ev.kind == "follows") {
      reg.call("sim", "users", "follow", ev.payload);
    } else if (ev.kind == "posts") {
      reg.call("sim", "posts", "publish", ev.payload);
    } else if (ev.kind == "timeline_requests") {
      out["timelines"].push_back(
          with_tick(reg.call("sim", "timeline", "get_timeline", ev.payload), ev.tick));
    } else {
      throw std::invalid_argument("mblogger has no event kind '" + ev.kind + "'");
    }
  };
  if (stage == Stage::Ml) {
    app.services.push_back(bot_service());
    app.channels.push_back("bot_posts");
    const Int target = options.bot_user;
    app.end_tick = [target](soa::Registry& reg, Tick tick, std::uint64_t seed,
                            ChannelOutputs& out) {
      const Document r = reg.call("sim", "bot", "generate_post",
                                  {{"seed", seed}, {"tick", tick}, {"user_id", target}});
      if (r.at("generated").get<bool>()) {
        out["bot_posts"].push_back(
            with_tick({{"text", r.at("text")}, {"user_id", r.at("user_id")}}, tick));
      }
    };
  }
  return app;
}

}  // namespace doa::apps::mblogger
