#include <unistd.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "doa/apps/app.hpp"
#include "doa/apps/insurance_claims.hpp"
#include "doa/apps/mblogger.hpp"
#include "doa/apps/ride_allocation.hpp"
#include "doa/apps/training.hpp"
#include "doa/cli/cli.hpp"
#include "doa/graph/traversal.hpp"
#include "doa/graph/validate.hpp"
#include "doa/metrics/manifest.hpp"
#include "doa/ml/ml.hpp"
#include "doa/sim/host.hpp"
#include "doa/sim/run.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace {

using namespace doa;
using apps::AppId;
using apps::Paradigm;
using apps::Stage;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

using Check = std::function<void(Outcome&)>;

std::string str(AppId app) { return std::string(apps::to_string(app)); }

int cli(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::ostringstream o, e;
  const int code = cli::run(args, o, e);
  if (out) *out = o.str();
  return code;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::size_t affected(AppId app, Paradigm p, Stage a, Stage b) {
  return metrics::diff(apps::manifest(app, p, a), apps::manifest(app, p, b)).affected_count();
}

/// Runs a version and keeps the host so internal streams can be inspected.
struct HostedRun {
  std::unique_ptr<sim::AppHost> host;
  sim::RunResult result;

  const RuntimeInstance& runtime() const {
    return dynamic_cast<const sim::FbpHost&>(*host).runtime();
  }
};

HostedRun hosted(const sim::Scenario& s, Paradigm p, Stage stage, apps::Models models = {}) {
  HostedRun run;
  run.host = sim::make_host(s.app, p, stage, sim::build_options(s, std::move(models)), s.seed);
  run.result = sim::run_scenario(s, *run.host, p, stage);
  return run;
}

void ac1(Outcome& o) {
  for (AppId app : {AppId::RideAllocation, AppId::InsuranceClaims}) {
    const auto start = std::chrono::steady_clock::now();
    std::string out;
    const int code = cli({"diff", str(app), "min", "data", "--paradigm", "fbp"}, &out);
    const double took = seconds_since(start);
    if (code != cli::kExitOk) o.fail(str(app) + ": exit " + std::to_string(code));
    if (out.find("affected_count 1\n") == std::string::npos) o.fail(str(app) + ": " + out);
    if (took >= 1.0) o.fail(str(app) + ": took " + std::to_string(took) + " s");
    o.detail += str(app) + "=" + std::to_string(affected(app, Paradigm::Fbp, Stage::Min, Stage::Data)) + " ";
  }
}

void ac2(Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  for (AppId app : apps::kAllApps) {
    bool strict = false;
    for (auto [a, b] : {std::pair{Stage::Min, Stage::Data}, std::pair{Stage::Data, Stage::Ml}}) {
      const std::size_t fbp = affected(app, Paradigm::Fbp, a, b);
      const std::size_t soa = affected(app, Paradigm::Soa, a, b);
      o.detail += str(app) + ":" + std::string(apps::to_string(a)) + "->" +
                  std::string(apps::to_string(b)) + " " + std::to_string(fbp) + "/" +
                  std::to_string(soa) + " ";
      if (fbp > soa) o.fail(str(app) + " fbp " + std::to_string(fbp) + " > soa " + std::to_string(soa));
      strict |= fbp < soa;
    }
    if (!strict) o.fail(str(app) + ": no strict improvement");
  }
  if (seconds_since(start) >= 5.0) o.fail("took too long");
}

void ac3(Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  for (AppId app : apps::kAllApps) {
    for (int seed : {1, 2, 3}) {
      std::string out;
      const int code =
          cli({"equiv", str(app), "--ticks", "100", "--seed", std::to_string(seed)}, &out);
      if (code != cli::kExitOk || out.find("MATCH") != out.size() - 6) {
        o.fail(str(app) + " seed " + std::to_string(seed) + ": " + out);
      }
    }
  }
  const double took = seconds_since(start);
  o.detail += "12 runs in " + std::to_string(took) + " s";
  if (took >= 10.0) o.fail("took " + std::to_string(took) + " s");
}

void ac4(Outcome& o, const fs::path& dir) {
  int runs = 0;
  for (AppId app : apps::kAllApps) {
    for (Paradigm p : apps::kAllParadigms) {
      for (Stage stage : apps::kAllStages) {
        std::vector<std::string> texts;
        for (int i = 0; i < 2; ++i) {
          const fs::path report = dir / ("report" + std::to_string(i) + ".json");
          std::string out;
          const int code = cli({"run", str(app), std::string(apps::to_string(p)),
                                std::string(apps::to_string(stage)), "--ticks", "60", "--seed",
                                "7", "--report", report.string()},
                               &out);
          if (code != cli::kExitOk) o.fail(apps::version_key(app, p, stage) + ": exit " + std::to_string(code));
          texts.push_back(out + "\n" + slurp(report));
        }
        if (texts[0] != texts[1]) o.fail(apps::version_key(app, p, stage) + ": reports differ");
        ++runs;
      }
    }
    if (!apps::has_offline_dataset(app)) continue;
    for (const char* p : {"fbp", "soa"}) {
      std::vector<std::string> files;
      for (int i = 0; i < 2; ++i) {
        const fs::path data = dir / ("data" + std::to_string(i) + ".jsonl");
        if (cli({"collect", str(app), "--out", data.string(), "--paradigm", p, "--seed", "7"}) !=
            cli::kExitOk) {
          o.fail(str(app) + " collect failed");
        }
        files.push_back(slurp(data));
      }
      if (files[0] != files[1] || files[0].empty()) o.fail(str(app) + " " + p + ": datasets differ");
      ++runs;
    }
  }
  o.detail += std::to_string(runs) + " commands repeated";
}

void ac5(Outcome& o) {
  int checked = 0;
  for (AppId app : apps::kAllApps) {
    for (Stage stage : {Stage::Data, Stage::Ml}) {
      const auto spec = apps::build_fbp(app, stage, {}).collection;
      if (!spec) continue;
      for (std::uint64_t seed : {1, 2, 3}) {
        const auto s = sim::Scenario::make(app, seed, 100);
        const auto models = stage == Stage::Ml ? sim::train_models(s, Paradigm::Fbp) : apps::Models{};
        const auto run = hosted(s, Paradigm::Fbp, stage, models);
        const auto& rt = run.runtime();
        std::size_t records = 0;
        for (const auto& [id, decl] : rt.graph().streams()) records += rt.log(id).size();
        if (records > 10000) o.fail(apps::version_key(app, Paradigm::Fbp, stage) + ": too many records");
        const auto got = collect(rt, *spec);
        const auto want = testing::brute_join(rt, *spec);
        if (got != want || got.empty()) {
          o.fail(apps::version_key(app, Paradigm::Fbp, stage) + " seed " + std::to_string(seed));
        }
        ++checked;
      }
    }
  }
  o.detail += std::to_string(checked) + " runs joined";
  if (checked == 0) o.fail("nothing collected");
}

void ac6(Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(2024);
  for (int i = 0; i < 200; ++i) {
    const FlowGraph g = testing::random_dag(rng, 20);
    if (!validate(g).ok()) {
      o.fail("generated graph invalid: " + validate(g).summary());
      continue;
    }
    if (!testing::respects_edges(g, topological_order(g))) o.fail("order violates an edge");
    const auto closure = testing::reach(g);
    for (const auto& [id, down] : closure) {
      if (downstream_closure(g, id) != down) o.fail("downstream of " + id);
      if (upstream_closure(g, id) != testing::brute_upstream(g, id)) o.fail("upstream of " + id);
    }
  }
  const double took = seconds_since(start);
  o.detail += "200 graphs in " + std::to_string(took) + " s";
  if (took >= 5.0) o.fail("took too long");
}

/// Realized wait and estimate for every ride that has both.
std::vector<std::pair<double, double>> waits_vs_estimates(const RuntimeInstance& rt) {
  const Schema& ps = rt.graph().find_stream("pickup_events")->schema;
  const Schema& es = rt.graph().find_stream("estimated_waits")->schema;
  std::map<Int, double> estimate;
  for (const Record& r : rt.log("estimated_waits")) {
    estimate[r.at<Int>(es.index_of("ride_id"))] = r.at<double>(es.index_of("estimated_wait"));
  }
  std::vector<std::pair<double, double>> pairs;
  for (const Record& r : rt.log("pickup_events")) {
    const auto it = estimate.find(r.at<Int>(ps.index_of("ride_id")));
    if (it != estimate.end()) {
      pairs.emplace_back(static_cast<double>(r.at<Int>(ps.index_of("wait_time"))), it->second);
    }
  }
  return pairs;
}

void ac7(Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  const auto clean = sim::Scenario::make(AppId::RideAllocation, 11, 200, {{"noise", 0.0}, {"layout", "line"}});
  const auto models = sim::train_models(clean, Paradigm::Fbp);
  const auto& m = *models.wait_time;
  if (std::abs(m.coefficients.at(0) - 2.0) > 1e-6) o.fail("slope " + std::to_string(m.coefficients[0]));
  if (std::abs(m.intercept - 1.0) > 1e-6) o.fail("intercept " + std::to_string(m.intercept));
  for (std::size_t i = 1; i < m.coefficients.size(); ++i) {
    if (std::abs(m.coefficients[i]) > 1e-6) o.fail("unused feature weight " + std::to_string(m.coefficients[i]));
  }
  const auto clean_run = hosted(clean, Paradigm::Fbp, Stage::Ml, models);
  const auto clean_pairs = waits_vs_estimates(clean_run.runtime());
  if (clean_pairs.empty()) o.fail("no noiseless rides");
  for (const auto& [wait, est] : clean_pairs) {
    if (std::abs(wait - est) > 1e-6) o.fail("noiseless estimate " + std::to_string(est) + " vs " + std::to_string(wait));
  }

  const auto train = sim::Scenario::make(AppId::RideAllocation, 21, 600);
  const auto noisy_models = sim::train_models(train, Paradigm::Fbp);
  const auto test = sim::Scenario::make(AppId::RideAllocation, 22, 600);
  const auto noisy = hosted(test, Paradigm::Fbp, Stage::Ml, noisy_models);
  const auto pairs = waits_vs_estimates(noisy.runtime());
  double total = 0.0;
  for (const auto& [wait, est] : pairs) total += std::abs(wait - est);
  const double mae = pairs.empty() ? INFINITY : total / static_cast<double>(pairs.size());
  if (pairs.size() < 200) o.fail("only " + std::to_string(pairs.size()) + " noisy rides");
  if (mae > 0.75) o.fail("noisy MAE " + std::to_string(mae));
  const double took = seconds_since(start);
  o.detail += "slope " + std::to_string(m.coefficients[0]) + ", intercept " +
              std::to_string(m.intercept) + ", noisy MAE " + std::to_string(mae) + " over " +
              std::to_string(pairs.size()) + " rides";
  if (took >= 10.0) o.fail("took " + std::to_string(took) + " s");
}

/// Fraction of routed claims whose decision equals the rule chain's.
std::pair<std::size_t, std::size_t> routed_agreement(const RuntimeInstance& rt, std::size_t limit) {
  const Schema& s = rt.graph().find_stream("routed_claims")->schema;
  std::size_t agree = 0, total = 0;
  for (const Record& r : rt.log("routed_claims")) {
    if (total == limit) break;
    apps::claims::Claim c;
    c.claim_id = r.at<Int>(s.index_of("claim_id"));
    c.kind = r.at<std::string>(s.index_of("kind"));
    c.amount = r.at<double>(s.index_of("amount"));
    c.prior_claims = r.at<Int>(s.index_of("prior_claims"));
    c.flagged = r.at<bool>(s.index_of("flagged"));
    agree += r.at<std::string>(s.index_of("decision")) == apps::claims::claim_route(c);
    ++total;
  }
  return {agree, total};
}

void ac8(Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  const auto train = sim::Scenario::make(AppId::InsuranceClaims, 5, 100);
  const auto rows = sim::run_version(train, Paradigm::Fbp, Stage::Data).dataset;
  const auto models = apps::fit_models(AppId::InsuranceClaims, rows);
  const auto& tree = *models.claim_router;
  std::size_t fit = 0;
  for (const auto& row : rows) {
    const auto c = apps::claim_from_row(row);
    fit += ml::predict_tree(tree, apps::claims::claim_features(c)) == apps::claims::claim_route(c);
  }
  const auto replay = hosted(train, Paradigm::Fbp, Stage::Ml, models);
  const auto [train_agree, train_total] = routed_agreement(replay.runtime(), SIZE_MAX);
  if (rows.empty() || fit != rows.size()) o.fail(std::to_string(fit) + "/" + std::to_string(rows.size()) + " training rows");
  if (train_agree != train_total) o.fail("classifier node on training claims " + std::to_string(train_agree) + "/" + std::to_string(train_total));

  const auto fresh = sim::Scenario::make(AppId::InsuranceClaims, 1234, 400);
  const auto run = hosted(fresh, Paradigm::Fbp, Stage::Ml, models);
  const auto [agree, total] = routed_agreement(run.runtime(), 1000);
  if (total < 1000) o.fail("only " + std::to_string(total) + " fresh claims");
  if (agree * 100 < total * 95) o.fail("fresh agreement " + std::to_string(agree) + "/" + std::to_string(total));
  const double took = seconds_since(start);
  o.detail += "training " + std::to_string(fit) + "/" + std::to_string(rows.size()) + ", fresh " +
              std::to_string(agree) + "/" + std::to_string(total) + ", depth " + std::to_string(tree.depth());
  if (took >= 10.0) o.fail("took " + std::to_string(took) + " s");
}

void ac9(Outcome& o) {
  std::size_t playlists = 0, titles = 0;
  for (Paradigm p : apps::kAllParadigms) {
    for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
      const auto s = sim::Scenario::make(AppId::PlaylistBuilder, seed, 100);
      const auto run = sim::run_version(s, p, Stage::Ml);
      std::vector<const Event*> movies;
      for (const Event& e : run.events) {
        if (e.kind == "movies") movies.push_back(&e);
      }
      for (const Document& pl : run.outputs.at("playlists")) {
        const Tick tick = pl.at("tick").get<Tick>();
        const auto genre = pl.at("genre").get<std::string>();
        std::vector<double> grosses;
        std::map<std::string, double> gross_of;
        for (const Event* m : movies) {
          if (m->tick > tick || m->payload.at("genre") != genre) continue;
          grosses.push_back(m->payload.at("gross").get<double>());
          gross_of[m->payload.at("title").get<std::string>()] = grosses.back();
        }
        const auto text = pl.at("titles").get<std::string>();
        ++playlists;
        if (grosses.empty()) {
          if (!text.empty()) o.fail("titles without movies");
          continue;
        }
        const double q = testing::brute_quantile(grosses, 3, 4);
        std::stringstream ss(text);
        for (std::string title; std::getline(ss, title, '|');) {
          ++titles;
          const auto it = gross_of.find(title);
          if (it == gross_of.end() || it->second < q) {
            o.fail(std::string(apps::to_string(p)) + " seed " + std::to_string(seed) + ": " + title + " below " + std::to_string(q));
          }
        }
      }
    }
  }
  o.detail += std::to_string(titles) + " titles in " + std::to_string(playlists) + " playlists";
  if (titles == 0) o.fail("no titles emitted");
}

void ac10(Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<std::string> corpus = {"a b", "a c"};
  int b = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const auto tokens = ml::tokenize(apps::mblogger::bot_post(corpus, static_cast<std::uint64_t>(i)));
    if (tokens.size() != 2 || tokens[0] != "a") o.fail("unexpected post");
    b += tokens.size() > 1 && tokens[1] == "b";
  }
  const double freq = static_cast<double>(b) / n;
  if (std::abs(freq - 0.5) > 0.02) o.fail("frequency " + std::to_string(freq));
  for (int i = 0; i < 1000; ++i) {
    if (apps::mblogger::bot_post({"hello world"}, static_cast<std::uint64_t>(i)) != "hello world") {
      o.fail("single bigram corpus not reproduced");
    }
  }
  o.detail += "second token b frequency " + std::to_string(freq);
  if (seconds_since(start) >= 5.0) o.fail("took too long");
}

void ac11(Outcome& o) {
  int versions = 0;
  for (AppId app : apps::kAllApps) {
    for (Stage stage : apps::kAllStages) {
      const auto g = apps::build_fbp(app, stage).graph;
      const auto key = apps::version_key(app, Paradigm::Fbp, stage);
      const auto report = validate(g);
      if (!report.ok()) o.fail(key + ": " + report.summary());
      for (const auto& [id, s] : g.streams()) {
        const auto producers = g.producers(id).size();
        const auto consumers = g.consumers(id).size();
        const bool good = s.category == StreamCategory::Input      ? producers == 0
                          : s.category == StreamCategory::Output   ? producers == 1 && consumers == 0
                                                                   : producers == 1 && consumers >= 1;
        if (!good) o.fail(key + ": stream " + id);
      }
      ++versions;
    }
  }
  o.detail += std::to_string(versions) + " graphs valid";
}

void ac12(Outcome& o) {
  int pairs = 0;
  for (AppId app : apps::kAllApps) {
    for (Paradigm p : apps::kAllParadigms) {
      for (std::uint64_t seed : {1, 2}) {
        const auto s = sim::Scenario::make(app, seed, 100);
        const auto min = sim::run_version(s, p, Stage::Min).report;
        const auto data = sim::run_version(s, p, Stage::Data).report;
        if (min.digest != data.digest) o.fail(apps::version_key(app, p, Stage::Data) + " seed " + std::to_string(seed));
        ++pairs;
      }
    }
  }
  o.detail += std::to_string(pairs) + " min/data pairs identical";
}

}  // namespace

int main() {
  const fs::path dir = fs::temp_directory_path() / ("doa_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);

  const std::vector<std::pair<std::string, Check>> criteria = {
      {"affected components min->data for offline-data apps", ac1},
      {"fbp affects no more components than soa", ac2},
      {"paradigm equivalence at min stage", ac3},
      {"deterministic reports and datasets", [&](Outcome& o) { ac4(o, dir); }},
      {"collection equals nested-loop join", ac5},
      {"traversal against transitive closure", ac6},
      {"wait-time regression recovery", ac7},
      {"claim classifier fidelity", ac8},
      {"playlist gross quantile filter", ac9},
      {"bigram generator sanity", ac10},
      {"every fbp version validates", ac11},
      {"data stage preserves business outputs", ac12},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    failed += !o.pass;
    while (!o.detail.empty() && o.detail.back() == ' ') o.detail.pop_back();
    std::cout << (o.pass ? "PASS" : "FAIL") << " AC" << i + 1 << " " << criteria[i].first
              << " (" << o.detail << ")\n";
  }
  fs::remove_all(dir);
  std::cout << criteria.size() - failed << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
