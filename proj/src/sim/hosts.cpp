#include "doa/sim/host.hpp"

namespace doa::sim {

FbpHost::FbpHost(apps::FbpApp app, std::uint64_t seed)
    : channels_(std::move(app.channels)),
      collection_(std::move(app.collection)),
      runtime_(RuntimeInstance::start(std::move(app.graph), seed)) {}

void FbpHost::deliver(const Event& event) {
  const StreamDecl* s = runtime_.graph().find_stream(event.kind);
  if (!s) throw RuntimeError("no input stream for event kind '" + event.kind + "'");
  runtime_.inject(event.kind, row_from_document(s->schema, event.payload));
  ++delivered_;
}

apps::ChannelOutputs FbpHost::end_tick(Tick tick) {
  if (runtime_.tick() != tick) {
    throw RuntimeError("runtime is at tick " + std::to_string(runtime_.tick()) +
                       ", simulation at " + std::to_string(tick));
  }
  runtime_.step();
  apps::ChannelOutputs out;
  for (const auto& ch : channels_) {
    const Schema& schema = runtime_.graph().find_stream(ch)->schema;
    auto& docs = out[ch];
    std::size_t& seen = read_[ch];
    for (const Record& r : runtime_.read(ch, seen)) {
      Document d = record_to_document(schema, r);
      d["tick"] = r.tick;
      docs.push_back(std::move(d));
    }
    seen = runtime_.log(ch).size();
  }
  return out;
}

Document FbpHost::counts() const {
  Document streams = Document::object();
  for (const auto& [id, s] : runtime_.graph().streams()) streams[id] = runtime_.log(id).size();
  return {{"streams", streams}};
}

std::vector<DatasetRow> FbpHost::dataset() {
  if (!collection_) return {};
  return collect(runtime_, *collection_);
}

SoaHost::SoaHost(apps::SoaApp app, std::uint64_t seed) : app_(std::move(app)), seed_(seed) {
  for (const auto& s : app_.services) registry_.register_service(s);
}

void SoaHost::deliver(const Event& event) {
  registry_.set_tick(event.tick);
  app_.deliver(registry_, event, pending_);
  ++delivered_;
}

apps::ChannelOutputs SoaHost::end_tick(Tick tick) {
  registry_.set_tick(tick);
  if (app_.end_tick) app_.end_tick(registry_, tick, seed_, pending_);
  apps::ChannelOutputs out = std::move(pending_);
  pending_.clear();
  for (const auto& ch : app_.channels) out[ch];
  return out;
}

Document SoaHost::counts() const {
  Document calls = Document::object();
  for (const auto& [api, n] : registry_.call_counts()) calls[api] = n;
  return {{"calls", calls}};
}

std::vector<DatasetRow> SoaHost::dataset() {
  if (!app_.export_dataset) return {};
  return app_.export_dataset(registry_);
}

std::unique_ptr<AppHost> make_host(apps::AppId app, apps::Paradigm paradigm, apps::Stage stage,
                                   const apps::BuildOptions& options, std::uint64_t seed) {
  if (paradigm == apps::Paradigm::Fbp) {
    return std::make_unique<FbpHost>(apps::build_fbp(app, stage, options), seed);
  }
  return std::make_unique<SoaHost>(apps::build_soa(app, stage, options), seed);
}

}  // namespace doa::sim
