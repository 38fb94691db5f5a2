#include "doa/apps/playlist_builder.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "common.hpp"

namespace doa::apps::playlist {

using namespace detail;

std::vector<std::string> build_playlist(const std::string& genre, const std::vector<Movie>& movies,
                                        Int k, std::uint64_t seed,
                                        std::optional<double> min_gross) {
  if (k < 1) throw std::invalid_argument("playlist size must be at least 1");
  std::vector<std::string> pool;
  for (const Movie& m : movies) {
    if (m.genre == genre && (!min_gross || m.gross >= *min_gross)) pool.push_back(m.title);
  }
  std::sort(pool.begin(), pool.end());
  const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), pool.size());
  Rng rng(seed);
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(take);
  return pool;
}

std::string join_titles(const std::vector<std::string>& titles) {
  std::string s;
  for (std::size_t i = 0; i < titles.size(); ++i) {
    if (i) s += '|';
    s += titles[i];
  }
  return s;
}

namespace {

const Schema kMovie("movie", {{"title", FieldType::Text},
                              {"genre", FieldType::Text},
                              {"gross", FieldType::Float}});
const Schema kRequest("playlist_request", {{"request_id", FieldType::Int},
                                           {"genre", FieldType::Text},
                                           {"k", FieldType::Int},
                                           {"seed", FieldType::Int}});
const Schema kPlaylist("playlist", {{"request_id", FieldType::Int},
                                    {"genre", FieldType::Text},
                                    {"titles", FieldType::Text}});
const Schema kQuantile("genre_quantile", {{"genre", FieldType::Text},
                                          {"q75", FieldType::Float},
                                          {"count", FieldType::Int}});

std::vector<Movie> movies_of(const PortView& v) {
  std::vector<Movie> out;
  for (const Record& r : v.history) {
    out.push_back({v.get<std::string>(r, "title"), v.get<std::string>(r, "genre"),
                   v.get<double>(r, "gross")});
  }
  return out;
}

Transform builder(bool filtered) {
  return [filtered](const NodeInput& in) {
    const PortView& req = in["requests"];
    NodeOutput out;
    auto& rows = out["playlists"];
    if (req.delta().empty()) return out;
    const auto movies = movies_of(in["movies"]);
    std::map<std::string, double> threshold;
    if (filtered) {
      const PortView& q = in["quantiles"];
      for (const Record& r : q.history) {
        threshold[q.get<std::string>(r, "genre")] = q.get<double>(r, "q75");
      }
    }
    for (const Record& r : req.delta()) {
      const std::string genre = req.get<std::string>(r, "genre");
      std::optional<double> min_gross;
      if (filtered) {
        auto it = threshold.find(genre);
        if (it != threshold.end()) min_gross = it->second;
      }
      const auto titles = build_playlist(genre, movies, req.get<Int>(r, "k"),
                                         static_cast<std::uint64_t>(req.get<Int>(r, "seed")),
                                         min_gross);
      rows.push_back({req.get<Int>(r, "request_id"), genre, join_titles(titles)});
    }
    return out;
  };
}

/// One record per genre touched this tick, computed over the genre's full history.
NodeOutput gross_quantiles(const NodeInput& in) {
  const PortView& v = in["movies"];
  NodeOutput out;
  std::set<std::string> touched;
  for (const Record& r : v.delta()) touched.insert(v.get<std::string>(r, "genre"));
  for (const auto& genre : touched) {
    ml::QuantileSketch sketch;
    for (const Record& r : v.history) {
      if (v.get<std::string>(r, "genre") == genre) sketch.add(v.get<double>(r, "gross"));
    }
    out["quantiles"].push_back(
        {genre, ml::quantile(sketch, kGrossQuantile), static_cast<Int>(sketch.size())});
  }
  return out;
}

}  // namespace

FbpApp build_fbp(Stage stage, const BuildOptions&) {
  FbpApp app;
  FlowGraph& g = app.graph;
  g.add_stream({"movies", StreamCategory::Input, kMovie});
  g.add_stream({"playlist_requests", StreamCategory::Input, kRequest});
  g.add_stream({"playlists", StreamCategory::Output, kPlaylist});
  app.channels = {"playlists"};

  if (stage != Stage::Min) {
    g.add_stream({"genre_quantiles",
                  stage == Stage::Ml ? StreamCategory::Internal : StreamCategory::Output,
                  kQuantile});
    g.add_node({"gross_quantiles", {in_port("movies", kMovie)},
                {out_port("quantiles", kQuantile)}, gross_quantiles, "1"},
               {{"movies", "movies"}}, {{"quantiles", "genre_quantiles"}});
    if (stage == Stage::Data) app.channels.push_back("genre_quantiles");
  }

  if (stage == Stage::Ml) {
    g.add_node({"playlist_builder",
                {in_port("movies", kMovie), in_port("quantiles", kQuantile),
                 in_port("requests", kRequest)},
                {out_port("playlists", kPlaylist)},
                builder(true),
                "2"},
               {{"movies", "movies"}, {"quantiles", "genre_quantiles"},
                {"requests", "playlist_requests"}},
               {{"playlists", "playlists"}});
  } else {
    g.add_node({"playlist_builder",
                {in_port("movies", kMovie), in_port("requests", kRequest)},
                {out_port("playlists", kPlaylist)},
                builder(false),
                "1"},
               {{"movies", "movies"}, {"requests", "playlist_requests"}},
               {{"playlists", "playlists"}});
  }
  return app;
}

// ---------------------------------------------------------------------------
// SOA: catalog and builder services

namespace {

soa::ServiceSpec catalog_service(Stage stage) {
  const bool data = stage != Stage::Min;
  const bool ml = stage == Stage::Ml;
  soa::ServiceSpec s;
  s.id = "catalog";
  s.apis.push_back({"add_movie", sig({"genre", "gross", "title"}, {"title"}), data ? "2" : "1",
                    [data](const Document& req, soa::ServiceContext& ctx) {
                      ctx.run("insert_movie", req);
                      if (data) ctx.run("update_quantiles", {{"genre", req.at("genre")}});
                      return Document{{"title", req.at("title")}};
                    }});
  std::set<std::string> list_in = {"genre"};
  if (ml) list_in.insert("min_gross");
  s.apis.push_back({"list_by_genre", sig(list_in, {"movies"}), ml ? "2" : "1",
                    [](const Document& req, soa::ServiceContext& ctx) {
                      return ctx.run("select_by_genre", req);
                    }});
  s.routines.push_back({"insert_movie", sig({"genre", "gross", "title"}, {}), "1",
                        [](soa::Store& st, const Document& args) {
                          st.put("movies", field<std::string>(args, "title"), args);
                          return empty();
                        }});
  s.routines.push_back({"select_by_genre", sig(list_in, {"movies"}), ml ? "2" : "1",
                        [ml](soa::Store& st, const Document& args) {
                          const auto genre = field<std::string>(args, "genre");
                          std::optional<double> min_gross;
                          if (ml && !args.at("min_gross").is_null()) {
                            min_gross = field<double>(args, "min_gross");
                          }
                          Document list = Document::array();
                          for (const auto& [k, m] : st.scan("movies")) {
                            if (field<std::string>(m, "genre") != genre) continue;
                            if (min_gross && field<double>(m, "gross") < *min_gross) continue;
                            list.push_back(m);
                          }
                          return Document{{"movies", list}};
                        }});
  if (!data) return s;

  s.apis.push_back({"get_quantile", sig({"genre"}, {"count", "genre", "q75"}), "1",
                    [](const Document& req, soa::ServiceContext& ctx) {
                      return ctx.run("load_quantile", req);
                    }});
  s.routines.push_back(
      {"update_quantiles", sig({"genre"}, {}), "1", [](soa::Store& st, const Document& args) {
         const auto genre = field<std::string>(args, "genre");
         ml::QuantileSketch sketch;
         for (const auto& [k, m] : st.scan("movies")) {
           if (field<std::string>(m, "genre") == genre) sketch.add(field<double>(m, "gross"));
         }
         st.put("quantiles", genre,
                {{"count", sketch.size()},
                 {"genre", genre},
                 {"q75", ml::quantile(sketch, kGrossQuantile)}});
         return empty();
       }});
  s.routines.push_back({"load_quantile", sig({"genre"}, {"count", "genre", "q75"}), "1",
                        [](soa::Store& st, const Document& args) {
                          const auto genre = field<std::string>(args, "genre");
                          return st.get("quantiles", genre)
                              .value_or(Document{{"count", 0}, {"genre", genre}, {"q75", nullptr}});
                        }});
  return s;
}

soa::ServiceSpec builder_service(Stage stage) {
  const bool ml = stage == Stage::Ml;
  soa::ServiceSpec s;
  s.id = "builder";
  s.apis.push_back(
      {"build_playlist", sig({"genre", "k", "request_id", "seed"}, {"genre", "request_id", "titles"}),
       ml ? "2" : "1", [ml](const Document& req, soa::ServiceContext& ctx) {
         const auto genre = field<std::string>(req, "genre");
         Document query{{"genre", genre}};
         std::optional<double> min_gross;
         if (ml) {
           const Document q = ctx.call("catalog", "get_quantile", {{"genre", genre}});
           query["min_gross"] = q.at("q75");
           if (!q.at("q75").is_null()) min_gross = field<double>(q, "q75");
         }
         std::vector<Movie> movies;
         const Document movies_reply = ctx.call("catalog", "list_by_genre", query);
         for (const auto& m : movies_reply.at("movies")) {
           movies.push_back({field<std::string>(m, "title"), field<std::string>(m, "genre"),
                             field<double>(m, "gross")});
         }
         const auto titles = build_playlist(genre, movies, field<Int>(req, "k"),
                                            static_cast<std::uint64_t>(field<Int>(req, "seed")),
                                            min_gross);
         return Document{{"genre", genre},
                         {"request_id", req.at("request_id")},
                         {"titles", join_titles(titles)}};
       }});
  return s;
}

}  // namespace

SoaApp build_soa(Stage stage, const BuildOptions&) {
  SoaApp app;
  app.services = {catalog_service(stage), builder_service(stage)};
  app.channels = {"playlists"};
  app.deliver = [](soa::Registry& reg, const Event& ev, ChannelOutputs& out) {
    if (ev.kind == "movies") {
      reg.call("sim", "catalog", "add_movie", ev.payload);
    } else if (ev.kind == "playlist_requests") {
      out["playlists"].push_back(
          with_tick(reg.call("sim", "builder", "build_playlist", ev.payload), ev.tick));
    } else {
      throw std::invalid_argument("playlist_builder has no event kind '" + ev.kind + "'");
    }
  };
  return app;
}

}  // namespace doa::apps::playlist
