#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "doa/apps/app.hpp"
#include "doa/runtime/runtime.hpp"
#include "doa/soa/registry.hpp"

namespace doa::sim {

/// One running application version, seen from the simulation.
class AppHost {
 public:
  virtual ~AppHost() = default;
  /// Inject (FBP) or call (SOA) for one event of the current tick.
  virtual void deliver(const Event& event) = 0;
  /// Finishes the tick and returns the new documents on every channel.
  virtual apps::ChannelOutputs end_tick(Tick tick) = 0;
  /// Per-stream record counts (FBP) or per-API call counts (SOA).
  virtual Document counts() const = 0;
  /// Offline dataset gathered so far; empty when the version collects none.
  virtual std::vector<DatasetRow> dataset() = 0;
  virtual const std::vector<std::string>& channels() const = 0;
  std::size_t delivered() const { return delivered_; }

 protected:
  std::size_t delivered_ = 0;
};

class FbpHost final : public AppHost {
 public:
  FbpHost(apps::FbpApp app, std::uint64_t seed);

  void deliver(const Event& event) override;
  apps::ChannelOutputs end_tick(Tick tick) override;
  Document counts() const override;
  std::vector<DatasetRow> dataset() override;
  const std::vector<std::string>& channels() const override { return channels_; }

  const RuntimeInstance& runtime() const { return runtime_; }

 private:
  std::vector<std::string> channels_;
  std::optional<CollectionSpec> collection_;
  RuntimeInstance runtime_;
  std::map<std::string, std::size_t> read_;
};

class SoaHost final : public AppHost {
 public:
  SoaHost(apps::SoaApp app, std::uint64_t seed);

  void deliver(const Event& event) override;
  apps::ChannelOutputs end_tick(Tick tick) override;
  Document counts() const override;
  std::vector<DatasetRow> dataset() override;
  const std::vector<std::string>& channels() const override { return app_.channels; }

  soa::Registry& registry() { return registry_; }

 private:
  apps::SoaApp app_;
  std::uint64_t seed_;
  soa::Registry registry_;
  apps::ChannelOutputs pending_;
};

std::unique_ptr<AppHost> make_host(apps::AppId app, apps::Paradigm paradigm, apps::Stage stage,
                                   const apps::BuildOptions& options, std::uint64_t seed);

}  // namespace doa::sim
