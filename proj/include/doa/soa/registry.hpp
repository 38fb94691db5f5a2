#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "doa/core/json_codec.hpp"

namespace doa::soa {

class ServiceError : public std::runtime_error {
 public:
  ServiceError(std::string service, std::string api, const std::string& what)
      : std::runtime_error(service + "." + api + ": " + what),
        service_(std::move(service)),
        api_(std::move(api)) {}

  const std::string& service() const { return service_; }
  const std::string& api() const { return api_; }

 private:
  std::string service_;
  std::string api_;
};

class UnknownServiceError : public ServiceError {
 public:
  using ServiceError::ServiceError;
};

class ReentrancyError : public ServiceError {
 public:
  using ServiceError::ServiceError;
};

/// Private key-value tables of one service (stand-in for its database).
class Store {
 public:
  std::optional<Document> get(std::string_view table, std::string_view key) const;
  void put(std::string_view table, std::string_view key, Document doc);
  /// Rows of a table in ascending key order.
  std::vector<std::pair<std::string, Document>> scan(std::string_view table) const;
  std::size_t size(std::string_view table) const;
  Document dump() const;

 private:
  std::map<std::string, std::map<std::string, Document, std::less<>>, std::less<>> tables_;
};

/// Field names accepted and returned by an API or data routine. Calls are
/// checked against it, and it feeds the component fingerprint.
struct Signature {
  std::set<std::string> inputs;
  std::set<std::string> outputs;
};

class ServiceContext;

using Handler = std::function<Document(const Document& request, ServiceContext& ctx)>;
using Routine = std::function<Document(Store& store, const Document& args)>;

struct ApiSpec {
  std::string name;
  Signature signature;
  std::string logic_version;
  Handler handler;
};

struct RoutineSpec {
  std::string name;
  Signature signature;
  std::string logic_version;
  Routine body;
};

struct ServiceSpec {
  std::string id;
  std::vector<ApiSpec> apis;
  std::vector<RoutineSpec> routines;
  /// Runs once against the fresh store at registration (e.g. model loading).
  std::function<void(Store&)> bootstrap;

  const ApiSpec* find_api(std::string_view name) const;
  const RoutineSpec* find_routine(std::string_view name) const;
};

struct CallEntry {
  std::string caller;
  std::string callee;
  std::string api;
  std::int64_t tick = 0;

  bool operator==(const CallEntry&) const = default;
};

class Registry;

/// Everything a handler may touch: its own data routines and outbound calls.
/// There is no accessor for any store, own or foreign.
class ServiceContext {
 public:
  Document call(std::string_view callee, std::string_view api, Document request);
  Document run(std::string_view routine, Document args);
  std::int64_t tick() const;
  const std::string& service() const { return service_; }

 private:
  friend class Registry;
  ServiceContext(Registry& registry, std::string service)
      : registry_(registry), service_(std::move(service)) {}

  Registry& registry_;
  std::string service_;
};

/// Synchronous in-process request/response between registered services.
/// Requests and responses are handed through, never retained.
class Registry {
 public:
  /// Throws std::invalid_argument on a duplicate id or duplicate API/routine names.
  void register_service(ServiceSpec spec);

  Document call(std::string_view caller, std::string_view callee, std::string_view api,
                Document request);

  void set_tick(std::int64_t tick) { tick_ = tick; }
  std::int64_t tick() const { return tick_; }

  const std::vector<CallEntry>& trace() const { return trace_; }
  /// "service.api" -> number of calls.
  std::map<std::string, std::size_t> call_counts() const;

  std::vector<const ServiceSpec*> services() const;

  /// Every piece of state the framework holds, as a document.
  Document introspect() const;

 private:
  friend class ServiceContext;
  struct Entry {
    ServiceSpec spec;
    Store store;
  };

  Document run_routine(const std::string& service, std::string_view routine, Document args);

  std::map<std::string, Entry, std::less<>> services_;
  std::set<std::pair<std::string, std::string>> in_flight_;
  std::vector<CallEntry> trace_;
  std::int64_t tick_ = 0;
};

/// Keys of an object document, for signature checks.
std::set<std::string> keys_of(const Document& doc);

}  // namespace doa::soa
