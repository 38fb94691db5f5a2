#include "doa/sim/run.hpp"

#include "doa/apps/training.hpp"
#include "doa/core/hash.hpp"

namespace doa::sim {

Document RunReport::to_json() const {
  Document ch = Document::object();
  for (const auto& [name, s] : channels) ch[name] = {{"count", s.count}, {"digest", s.digest}};
  return {{"app", app},           {"channels", ch},      {"counts", counts},
          {"delivered", delivered}, {"digest", digest},  {"events", events},
          {"paradigm", paradigm}, {"seed", seed},        {"stage", stage},
          {"ticks", ticks},       {"version", version}};
}

std::string RunReport::dump() const { return to_json().dump(2) + "\n"; }

std::string channel_digest(const std::vector<Document>& docs) {
  Fnv1a h;
  for (const auto& d : docs) h.add(d.dump()).add("\n");
  return h.hex();
}

std::string business_digest(apps::AppId app, const apps::ChannelOutputs& outputs) {
  auto names = apps::business_channels(app);
  std::sort(names.begin(), names.end());
  Fnv1a h;
  for (const auto& name : names) {
    h.add(name).add("\n");
    auto it = outputs.find(name);
    if (it == outputs.end()) continue;
    for (const auto& d : it->second) h.add(d.dump()).add("\n");
  }
  return h.hex();
}

RunResult run_scenario(const Scenario& scenario, AppHost& host, apps::Paradigm paradigm,
                       apps::Stage stage) {
  RunResult result;
  auto world = make_world(scenario);
  Rng rng(scenario.seed);
  for (const auto& ch : host.channels()) result.outputs[ch];

  for (Tick t = 0; t < scenario.ticks; ++t) {
    try {
      auto events = world->generate(t, rng);
      for (const Event& ev : events) host.deliver(ev);
      auto produced = host.end_tick(t);
      world->observe(t, produced, rng);
      for (auto& [ch, docs] : produced) {
        auto& all = result.outputs[ch];
        all.insert(all.end(), docs.begin(), docs.end());
      }
      result.events.insert(result.events.end(), std::make_move_iterator(events.begin()),
                           std::make_move_iterator(events.end()));
    } catch (const std::exception& e) {
      throw RuntimeError("tick " + std::to_string(t) + ": " + e.what());
    }
  }

  RunReport& r = result.report;
  r.version = apps::version_key(scenario.app, paradigm, stage);
  r.app = apps::to_string(scenario.app);
  r.paradigm = apps::to_string(paradigm);
  r.stage = apps::to_string(stage);
  r.seed = scenario.seed;
  r.ticks = scenario.ticks;
  r.events = result.events.size();
  r.delivered = host.delivered();
  r.counts = host.counts();
  for (const auto& [ch, docs] : result.outputs) r.channels[ch] = {docs.size(), channel_digest(docs)};
  r.digest = business_digest(scenario.app, result.outputs);
  result.dataset = host.dataset();
  return result;
}

apps::BuildOptions build_options(const Scenario& scenario, apps::Models models) {
  apps::BuildOptions o;
  o.models = std::move(models);
  if (scenario.params.contains("bot_user")) o.bot_user = scenario.param<Int>("bot_user");
  return o;
}

apps::Models train_models(const Scenario& scenario, apps::Paradigm paradigm) {
  if (!apps::has_offline_dataset(scenario.app)) return {};
  auto host = make_host(scenario.app, paradigm, apps::Stage::Data, build_options(scenario),
                        scenario.seed);
  const RunResult data = run_scenario(scenario, *host, paradigm, apps::Stage::Data);
  if (data.dataset.empty()) {
    throw ml::MlError("the data-stage run produced an empty dataset; nothing to train on");
  }
  return apps::fit_models(scenario.app, data.dataset);
}

RunResult run_version(const Scenario& scenario, apps::Paradigm paradigm, apps::Stage stage,
                      std::optional<apps::Models> models) {
  if (!models) {
    models = stage == apps::Stage::Ml ? train_models(scenario, paradigm) : apps::Models{};
  }
  auto host = make_host(scenario.app, paradigm, stage, build_options(scenario, *models),
                        scenario.seed);
  return run_scenario(scenario, *host, paradigm, stage);
}

}  // namespace doa::sim
