#include "doa/soa/registry.hpp"

#include <stdexcept>

namespace doa::soa {

std::set<std::string> keys_of(const Document& doc) {
  std::set<std::string> keys;
  if (doc.is_object()) {
    for (const auto& [k, v] : doc.items()) keys.insert(k);
  }
  return keys;
}

namespace {

std::string join(const std::set<std::string>& names) {
  std::string out = "{";
  for (const auto& n : names) out += (out.size() > 1 ? "," : "") + n;
  return out + "}";
}

void check_fields(const std::string& what, const std::set<std::string>& expected,
                  const Document& doc) {
  if (!doc.is_object()) throw std::invalid_argument(what + " must be an object");
  const auto got = keys_of(doc);
  if (got != expected) {
    throw std::invalid_argument(what + " fields " + join(got) + " do not match " + join(expected));
  }
}

}  // namespace

// ---------------------------------------------------------------------------

std::optional<Document> Store::get(std::string_view table, std::string_view key) const {
  auto t = tables_.find(table);
  if (t == tables_.end()) return std::nullopt;
  auto row = t->second.find(key);
  if (row == t->second.end()) return std::nullopt;
  return row->second;
}

void Store::put(std::string_view table, std::string_view key, Document doc) {
  auto t = tables_.find(table);
  if (t == tables_.end()) t = tables_.emplace(std::string(table), decltype(t->second){}).first;
  t->second.insert_or_assign(std::string(key), std::move(doc));
}

std::vector<std::pair<std::string, Document>> Store::scan(std::string_view table) const {
  std::vector<std::pair<std::string, Document>> rows;
  auto t = tables_.find(table);
  if (t == tables_.end()) return rows;
  for (const auto& [k, v] : t->second) rows.emplace_back(k, v);
  return rows;
}

std::size_t Store::size(std::string_view table) const {
  auto t = tables_.find(table);
  return t == tables_.end() ? 0 : t->second.size();
}

Document Store::dump() const {
  Document doc = Document::object();
  for (const auto& [name, rows] : tables_) {
    Document table = Document::object();
    for (const auto& [k, v] : rows) table[k] = v;
    doc[name] = std::move(table);
  }
  return doc;
}

// ---------------------------------------------------------------------------

const ApiSpec* ServiceSpec::find_api(std::string_view name) const {
  for (const auto& a : apis) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

const RoutineSpec* ServiceSpec::find_routine(std::string_view name) const {
  for (const auto& r : routines) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

Document ServiceContext::call(std::string_view callee, std::string_view api, Document request) {
  return registry_.call(service_, callee, api, std::move(request));
}

Document ServiceContext::run(std::string_view routine, Document args) {
  return registry_.run_routine(service_, routine, std::move(args));
}

std::int64_t ServiceContext::tick() const { return registry_.tick(); }

// ---------------------------------------------------------------------------

void Registry::register_service(ServiceSpec spec) {
  if (spec.id.empty()) throw std::invalid_argument("service id is empty");
  if (services_.count(spec.id)) {
    throw std::invalid_argument("service '" + spec.id + "' is already registered");
  }
  std::set<std::string> names;
  for (const auto& a : spec.apis) {
    if (!names.insert("api:" + a.name).second) {
      throw std::invalid_argument("service '" + spec.id + "' repeats api '" + a.name + "'");
    }
  }
  for (const auto& r : spec.routines) {
    if (!names.insert("routine:" + r.name).second) {
      throw std::invalid_argument("service '" + spec.id + "' repeats routine '" + r.name + "'");
    }
  }
  Entry entry{std::move(spec), Store{}};
  if (entry.spec.bootstrap) entry.spec.bootstrap(entry.store);
  std::string id = entry.spec.id;
  services_.emplace(std::move(id), std::move(entry));
}

Document Registry::call(std::string_view caller, std::string_view callee, std::string_view api,
                        Document request) {
  auto it = services_.find(callee);
  if (it == services_.end()) {
    throw UnknownServiceError(std::string(callee), std::string(api), "unknown service");
  }
  const ApiSpec* spec = it->second.spec.find_api(api);
  if (!spec) throw ServiceError(std::string(callee), std::string(api), "unknown api");

  const auto key = std::make_pair(std::string(callee), std::string(api));
  if (in_flight_.count(key)) {
    throw ReentrancyError(key.first, key.second, "re-entrant call rejected");
  }
  trace_.push_back({std::string(caller), key.first, key.second, tick_});

  struct Guard {
    std::set<std::pair<std::string, std::string>>& set;
    std::pair<std::string, std::string> key;
    ~Guard() { set.erase(key); }
  } guard{in_flight_, key};
  in_flight_.insert(key);

  try {
    check_fields("request", spec->signature.inputs, request);
    ServiceContext ctx(*this, key.first);
    Document response = spec->handler(request, ctx);
    check_fields("response", spec->signature.outputs, response);
    return response;
  } catch (const ServiceError&) {
    throw;
  } catch (const std::exception& e) {
    throw ServiceError(key.first, key.second, e.what());
  }
}

Document Registry::run_routine(const std::string& service, std::string_view routine,
                               Document args) {
  Entry& entry = services_.find(service)->second;
  const RoutineSpec* spec = entry.spec.find_routine(routine);
  if (!spec) {
    throw std::invalid_argument("service '" + service + "' has no data routine '" +
                                std::string(routine) + "'");
  }
  check_fields("routine " + spec->name + " arguments", spec->signature.inputs, args);
  Document result = spec->body(entry.store, args);
  check_fields("routine " + spec->name + " result", spec->signature.outputs, result);
  return result;
}

std::map<std::string, std::size_t> Registry::call_counts() const {
  std::map<std::string, std::size_t> counts;
  for (const auto& c : trace_) ++counts[c.callee + "." + c.api];
  return counts;
}

std::vector<const ServiceSpec*> Registry::services() const {
  std::vector<const ServiceSpec*> out;
  for (const auto& [id, entry] : services_) out.push_back(&entry.spec);
  return out;
}

Document Registry::introspect() const {
  Document doc = Document::object();
  Document services = Document::object();
  for (const auto& [id, entry] : services_) {
    Document apis = Document::array();
    for (const auto& a : entry.spec.apis) apis.push_back(a.name);
    Document routines = Document::array();
    for (const auto& r : entry.spec.routines) routines.push_back(r.name);
    services[id] = {{"apis", apis}, {"routines", routines}, {"store", entry.store.dump()}};
  }
  Document trace = Document::array();
  for (const auto& c : trace_) {
    trace.push_back({{"api", c.api}, {"callee", c.callee}, {"caller", c.caller}, {"tick", c.tick}});
  }
  Document in_flight = Document::array();
  for (const auto& [s, a] : in_flight_) in_flight.push_back(s + "." + a);
  doc["services"] = std::move(services);
  doc["trace"] = std::move(trace);
  doc["in_flight"] = std::move(in_flight);
  doc["tick"] = tick_;
  return doc;
}

}  // namespace doa::soa
