#include "doa/apps/ride_allocation.hpp"

#include <cmath>
#include <map>

#include "common.hpp"

namespace doa::apps::ride {

using namespace detail;

double distance(double ax, double ay, double bx, double by) { return std::hypot(ax - bx, ay - by); }

Allocation allocate(const Request& request, const std::vector<Driver>& drivers) {
  Allocation a;
  a.ride_id = request.ride_id;
  for (const Driver& d : drivers) {
    if (!d.available) continue;
    ++a.available_drivers;
    const double dist = distance(request.x, request.y, d.x, d.y);
    if (!a.matched() || dist < a.distance || (dist == a.distance && d.driver_id < a.driver_id)) {
      a.driver_id = d.driver_id;
      a.distance = dist;
    }
  }
  if (!a.matched()) a.distance = 0.0;
  return a;
}

std::vector<double> wait_features(double distance, Int hour, Int available_drivers) {
  return {distance, static_cast<double>(hour), static_cast<double>(available_drivers)};
}

CollectionSpec collection_spec() {
  return {{"pickup_events", {"wait_time"}, "ride_id"},
          {{"ride_requests", {"hour"}, "ride_id"},
           {"assignments", {"distance", "available_drivers"}, "ride_id"}},
          "ride_wait_times"};
}

namespace {

const Schema kRequest("ride_request", {{"ride_id", FieldType::Int},
                                       {"x", FieldType::Float},
                                       {"y", FieldType::Float},
                                       {"hour", FieldType::Int}});
const Schema kDriverUpdate("driver_update", {{"driver_id", FieldType::Int},
                                             {"x", FieldType::Float},
                                             {"y", FieldType::Float},
                                             {"available", FieldType::Bool}});
const Schema kPickup("pickup", {{"ride_id", FieldType::Int}, {"driver_id", FieldType::Int}});
const Schema kAssignment("assignment", {{"ride_id", FieldType::Int},
                                        {"driver_id", FieldType::Int},
                                        {"matched", FieldType::Bool},
                                        {"distance", FieldType::Float},
                                        {"available_drivers", FieldType::Int}});
const Schema kAllocation("allocation", {{"ride_id", FieldType::Int}, {"driver_id", FieldType::Int}});
const Schema kPickupEvent("pickup_event", {{"ride_id", FieldType::Int},
                                           {"driver_id", FieldType::Int},
                                           {"wait_time", FieldType::Int}});
const Schema kRideStats("ride_stats", {{"completed", FieldType::Int}, {"mean_wait", FieldType::Float}});
const Schema kEstimatedWait("estimated_wait",
                            {{"ride_id", FieldType::Int}, {"estimated_wait", FieldType::Float}});

/// Replays the whole request/driver history so the node keeps no state.
NodeOutput allocator(const NodeInput& in) {
  const PortView& req = in["requests"];
  const PortView& drv = in["drivers"];
  std::map<Int, Driver> drivers;
  std::vector<Driver> pool;
  NodeOutput out;
  auto& rows = out["assignments"];
  std::size_t di = 0;
  for (std::size_t ri = 0; ri < req.history.size(); ++ri) {
    const Record& r = req.history[ri];
    for (; di < drv.history.size() && drv.history[di].tick <= r.tick; ++di) {
      const Record& u = drv.history[di];
      const Int id = drv.get<Int>(u, "driver_id");
      drivers[id] = {id, drv.get<double>(u, "x"), drv.get<double>(u, "y"),
                     drv.get<bool>(u, "available")};
    }
    pool.clear();
    for (const auto& [id, d] : drivers) pool.push_back(d);
    const Allocation a = allocate(
        {req.get<Int>(r, "ride_id"), req.get<double>(r, "x"), req.get<double>(r, "y")}, pool);
    if (a.matched()) drivers[a.driver_id].available = false;
    if (ri >= req.delta_begin) {
      rows.push_back({a.ride_id, a.driver_id, a.matched(), a.distance, a.available_drivers});
    }
  }
  return out;
}

NodeOutput dispatcher(const NodeInput& in) {
  const PortView& as = in["assignments"];
  NodeOutput out;
  auto& rows = out["allocations"];
  for (const Record& r : as.delta()) {
    rows.push_back({as.get<Int>(r, "ride_id"), as.get<Int>(r, "driver_id")});
  }
  return out;
}

NodeOutput ride_tracker(const NodeInput& in) {
  const PortView& as = in["assignments"];
  const PortView& pk = in["pickups"];
  NodeOutput out;
  auto& rows = out["pickup_events"];
  if (pk.delta().empty()) return out;
  std::map<Int, Tick> assigned_at;
  for (const Record& r : as.history) assigned_at[as.get<Int>(r, "ride_id")] = r.tick;
  for (const Record& p : pk.delta()) {
    const Int ride_id = pk.get<Int>(p, "ride_id");
    auto it = assigned_at.find(ride_id);
    if (it == assigned_at.end()) {
      throw std::runtime_error("pickup for unknown ride " + std::to_string(ride_id));
    }
    rows.push_back({ride_id, pk.get<Int>(p, "driver_id"), Int{p.tick - it->second}});
  }
  return out;
}

/// Running totals over every completed pickup so far.
NodeOutput ride_history(const NodeInput& in) {
  const PortView& ev = in["pickup_events"];
  NodeOutput out;
  if (ev.delta().empty()) return out;
  Int total = 0;
  for (const Record& r : ev.history) total += ev.get<Int>(r, "wait_time");
  const auto n = static_cast<Int>(ev.history.size());
  out["ride_stats"].push_back({n, static_cast<double>(total) / static_cast<double>(n)});
  return out;
}

Transform wait_estimator(std::optional<ml::LinearModel> model) {
  return [model = std::move(model)](const NodeInput& in) {
    const PortView& as = in["assignments"];
    const PortView& req = in["requests"];
    NodeOutput out;
    auto& rows = out["estimated_waits"];
    if (as.delta().empty()) return out;
    if (!model) throw ml::MlError("wait-time model not loaded");
    std::map<Int, Int> hour;
    for (const Record& r : req.history) hour[req.get<Int>(r, "ride_id")] = req.get<Int>(r, "hour");
    for (const Record& a : as.delta()) {
      if (!as.get<bool>(a, "matched")) continue;
      const Int ride_id = as.get<Int>(a, "ride_id");
      const auto x = wait_features(as.get<double>(a, "distance"), hour.at(ride_id),
                                   as.get<Int>(a, "available_drivers"));
      rows.push_back({ride_id, ml::predict_linear(*model, x)});
    }
    return out;
  };
}

}  // namespace

FbpApp build_fbp(Stage stage, const BuildOptions& options) {
  FbpApp app;
  FlowGraph& g = app.graph;
  g.add_stream({"ride_requests", StreamCategory::Input, kRequest});
  g.add_stream({"driver_updates", StreamCategory::Input, kDriverUpdate});
  g.add_stream({"pickups", StreamCategory::Input, kPickup});
  g.add_stream({"assignments", StreamCategory::Internal, kAssignment});
  g.add_stream({"allocations", StreamCategory::Output, kAllocation});
  g.add_stream({"pickup_events", StreamCategory::Internal, kPickupEvent});
  g.add_stream({"ride_stats", StreamCategory::Output, kRideStats});

  g.add_node({"allocator",
              {in_port("requests", kRequest), in_port("drivers", kDriverUpdate)},
              {out_port("assignments", kAssignment)},
              allocator,
              "1"},
             {{"requests", "ride_requests"}, {"drivers", "driver_updates"}},
             {{"assignments", "assignments"}});
  g.add_node({"dispatcher",
              {in_port("assignments", kAssignment)},
              {out_port("allocations", kAllocation)},
              dispatcher,
              "1"},
             {{"assignments", "assignments"}}, {{"allocations", "allocations"}});
  g.add_node({"ride_tracker",
              {in_port("assignments", kAssignment), in_port("pickups", kPickup)},
              {out_port("pickup_events", kPickupEvent)},
              ride_tracker,
              "1"},
             {{"assignments", "assignments"}, {"pickups", "pickups"}},
             {{"pickup_events", "pickup_events"}});
  g.add_node({"ride_history",
              {in_port("pickup_events", kPickupEvent)},
              {out_port("ride_stats", kRideStats)},
              ride_history,
              "1"},
             {{"pickup_events", "pickup_events"}}, {{"ride_stats", "ride_stats"}});
  app.channels = {"allocations", "ride_stats"};
  if (stage == Stage::Min) return app;

  app.collection = collection_spec();
  add_collector(g, *app.collection, "wait_time_collector", "1");
  if (stage == Stage::Data) return app;

  g.add_stream({"estimated_waits", StreamCategory::Output, kEstimatedWait});
  g.add_node({"wait_estimator",
              {in_port("assignments", kAssignment), in_port("requests", kRequest)},
              {out_port("estimated_waits", kEstimatedWait)},
              wait_estimator(options.models.wait_time),
              "1"},
             {{"assignments", "assignments"}, {"requests", "ride_requests"}},
             {{"estimated_waits", "estimated_waits"}});
  app.channels.push_back("estimated_waits");
  return app;
}

// ---------------------------------------------------------------------------
// SOA: drivers, allocator and rides services (plus estimator at stage ml)

namespace {

soa::ServiceSpec drivers_service() {
  soa::ServiceSpec s;
  s.id = "drivers";
  s.apis.push_back({"update_driver", sig({"available", "driver_id", "x", "y"}, {"driver_id"}), "1",
                    [](const Document& req, soa::ServiceContext& ctx) {
                      ctx.run("put_driver", req);
                      return Document{{"driver_id", req.at("driver_id")}};
                    }});
  s.apis.push_back({"list_available", sig({}, {"drivers"}), "1",
                    [](const Document&, soa::ServiceContext& ctx) {
                      return ctx.run("select_available", empty());
                    }});
  s.apis.push_back({"reserve", sig({"driver_id"}, {"driver_id"}), "1",
                    [](const Document& req, soa::ServiceContext& ctx) {
                      ctx.run("set_available",
                              {{"available", false}, {"driver_id", req.at("driver_id")}});
                      return Document{{"driver_id", req.at("driver_id")}};
                    }});
  s.routines.push_back({"put_driver", sig({"available", "driver_id", "x", "y"}, {}), "1",
                        [](soa::Store& st, const Document& args) {
                          st.put("drivers", key_of(field<Int>(args, "driver_id")), args);
                          return empty();
                        }});
  s.routines.push_back({"select_available", sig({}, {"drivers"}), "1",
                        [](soa::Store& st, const Document&) {
                          Document list = Document::array();
                          for (auto& [k, d] : st.scan("drivers")) {
                            if (field<bool>(d, "available")) list.push_back(d);
                          }
                          return Document{{"drivers", list}};
                        }});
  s.routines.push_back({"set_available", sig({"available", "driver_id"}, {}), "1",
                        [](soa::Store& st, const Document& args) {
                          const std::string key = key_of(field<Int>(args, "driver_id"));
                          auto d = st.get("drivers", key);
                          if (!d) throw std::invalid_argument("unknown driver " + key);
                          (*d)["available"] = args.at("available");
                          st.put("drivers", key, *d);
                          return empty();
                        }});
  return s;
}

soa::ServiceSpec allocator_service(Stage stage) {
  const bool data = stage != Stage::Min;
  soa::ServiceSpec s;
  s.id = "allocator";
  std::set<std::string> response = {"driver_id", "ride_id"};
  if (data) response.insert({"available_drivers", "distance"});
  s.apis.push_back(
      {"allocate", sig({"ride_id", "x", "y"}, response), data ? "2" : "1",
       [data](const Document& req, soa::ServiceContext& ctx) {
         std::vector<Driver> pool;
         const Document drivers_reply = ctx.call("drivers", "list_available", empty());
         for (const auto& d : drivers_reply.at("drivers")) {
           pool.push_back({field<Int>(d, "driver_id"), field<double>(d, "x"),
                           field<double>(d, "y"), field<bool>(d, "available")});
         }
         const Allocation a = allocate(
             {field<Int>(req, "ride_id"), field<double>(req, "x"), field<double>(req, "y")}, pool);
         if (a.matched()) ctx.call("drivers", "reserve", {{"driver_id", a.driver_id}});
         Document resp{{"driver_id", a.driver_id}, {"ride_id", a.ride_id}};
         if (data) {
           resp["available_drivers"] = a.available_drivers;
           resp["distance"] = a.distance;
         }
         return resp;
       }});
  return s;
}

soa::ServiceSpec rides_service(Stage stage) {
  const bool data = stage != Stage::Min;
  const bool ml = stage == Stage::Ml;
  soa::ServiceSpec s;
  s.id = "rides";

  std::set<std::string> response = {"driver_id", "ride_id"};
  if (ml) response.insert("estimated_wait");
  s.apis.push_back(
      {"request_ride", sig({"hour", "ride_id", "x", "y"}, response),
       ml ? "3" : (data ? "2" : "1"),
       [data, ml](const Document& req, soa::ServiceContext& ctx) {
         const Document a = ctx.call(
             "allocator", "allocate",
             {{"ride_id", req.at("ride_id")}, {"x", req.at("x")}, {"y", req.at("y")}});
         Document ride{{"driver_id", a.at("driver_id")},
                       {"ride_id", req.at("ride_id")},
                       {"tick", ctx.tick()}};
         if (data) {
           ride["available_drivers"] = a.at("available_drivers");
           ride["distance"] = a.at("distance");
           ride["hour"] = req.at("hour");
         }
         ctx.run("save_ride", ride);
         Document resp{{"driver_id", a.at("driver_id")}, {"ride_id", req.at("ride_id")}};
         if (ml) {
           resp["estimated_wait"] = nullptr;
           if (field<Int>(a, "driver_id") >= 0) {
             resp["estimated_wait"] =
                 ctx.call("estimator", "estimate",
                          {{"available_drivers", a.at("available_drivers")},
                           {"distance", a.at("distance")},
                           {"hour", req.at("hour")}})
                     .at("estimated_wait");
           }
         }
         return resp;
       }});
  s.apis.push_back({"pickup", sig({"driver_id", "ride_id"}, {"ride_id"}), data ? "2" : "1",
                    [data](const Document& req, soa::ServiceContext& ctx) {
                      const Document ride = ctx.run(
                          "mark_picked_up", {{"ride_id", req.at("ride_id")}, {"tick", ctx.tick()}});
                      if (data) {
                        const Int wait = ctx.tick() - field<Int>(ride, "request_tick");
                        ctx.run("save_label", {{"ride_id", req.at("ride_id")}, {"wait_time", wait}});
                      }
                      return Document{{"ride_id", req.at("ride_id")}};
                    }});

  std::set<std::string> ride_fields = {"driver_id", "ride_id", "tick"};
  if (data) ride_fields.insert({"available_drivers", "distance", "hour"});
  s.routines.push_back({"save_ride", sig(ride_fields, {}), data ? "2" : "1",
                        [](soa::Store& st, const Document& args) {
                          st.put("rides", key_of(field<Int>(args, "ride_id")), args);
                          return empty();
                        }});
  s.routines.push_back({"mark_picked_up", sig({"ride_id", "tick"}, {"request_tick"}), "1",
                        [](soa::Store& st, const Document& args) {
                          const std::string key = key_of(field<Int>(args, "ride_id"));
                          auto ride = st.get("rides", key);
                          if (!ride) throw std::invalid_argument("pickup for unknown ride " + key);
                          (*ride)["picked_up_at"] = args.at("tick");
                          st.put("rides", key, *ride);
                          return Document{{"request_tick", ride->at("tick")}};
                        }});
  if (!data) return s;

  s.apis.push_back({"export_dataset", sig({}, {"rows"}), "1",
                    [](const Document&, soa::ServiceContext& ctx) {
                      return ctx.run("load_training_rows", empty());
                    }});
  s.routines.push_back({"save_label", sig({"ride_id", "wait_time"}, {}), "1",
                        [](soa::Store& st, const Document& args) {
                          st.put("labels", seq_key(st.size("labels")), args);
                          return empty();
                        }});
  s.routines.push_back(
      {"load_training_rows", sig({}, {"rows"}), "1", [](soa::Store& st, const Document&) {
         Document rows = Document::array();
         for (const auto& [k, label] : st.scan("labels")) {
           const Document ride = *st.get("rides", key_of(field<Int>(label, "ride_id")));
           rows.push_back({{"key", label.at("ride_id")},
                           {"features",
                            {{"assignments.available_drivers", ride.at("available_drivers")},
                             {"assignments.distance", ride.at("distance")},
                             {"ride_requests.hour", ride.at("hour")}}},
                           {"label", {{"wait_time", label.at("wait_time")}}}});
         }
         return Document{{"rows", rows}};
       }});
  return s;
}

soa::ServiceSpec estimator_service(std::optional<ml::LinearModel> model) {
  soa::ServiceSpec s;
  s.id = "estimator";
  s.bootstrap = [model](soa::Store& st) {
    if (model) st.put("models", "wait_time", ml::to_document(*model));
  };
  s.apis.push_back(
      {"estimate", sig({"available_drivers", "distance", "hour"}, {"estimated_wait"}), "1",
       [](const Document& req, soa::ServiceContext& ctx) {
         const Document m = ctx.run("load_model", empty()).at("model");
         if (m.is_null()) throw ml::MlError("wait-time model not loaded");
         const auto x = wait_features(field<double>(req, "distance"), field<Int>(req, "hour"),
                                      field<Int>(req, "available_drivers"));
         return Document{{"estimated_wait", ml::predict_linear(ml::linear_from_document(m), x)}};
       }});
  s.routines.push_back({"load_model", sig({}, {"model"}), "1",
                        [](soa::Store& st, const Document&) {
                          return Document{{"model", st.get("models", "wait_time").value_or(nullptr)}};
                        }});
  return s;
}

}  // namespace

SoaApp build_soa(Stage stage, const BuildOptions& options) {
  SoaApp app;
  app.services = {drivers_service(), allocator_service(stage), rides_service(stage)};
  if (stage == Stage::Ml) app.services.push_back(estimator_service(options.models.wait_time));
  app.channels = {"allocations"};
  if (stage == Stage::Ml) app.channels.push_back("estimated_waits");

  app.deliver = [stage](soa::Registry& reg, const Event& ev, ChannelOutputs& out) {
    if (ev.kind == "driver_updates") {
      reg.call("sim", "drivers", "update_driver", ev.payload);
    } else if (ev.kind == "pickups") {
      reg.call("sim", "rides", "pickup", ev.payload);
    } else if (ev.kind == "ride_requests") {
      const Document r = reg.call("sim", "rides", "request_ride", ev.payload);
      out["allocations"].push_back(
          with_tick({{"driver_id", r.at("driver_id")}, {"ride_id", r.at("ride_id")}}, ev.tick));
      if (stage == Stage::Ml && !r.at("estimated_wait").is_null()) {
        out["estimated_waits"].push_back(with_tick(
            {{"estimated_wait", r.at("estimated_wait")}, {"ride_id", r.at("ride_id")}}, ev.tick));
      }
    } else {
      throw std::invalid_argument("ride_allocation has no event kind '" + ev.kind + "'");
    }
  };
  if (stage != Stage::Min) {
    app.export_dataset = [](soa::Registry& reg) {
      std::vector<DatasetRow> rows;
      const Document rows_reply = reg.call("sim", "rides", "export_dataset", empty());
      for (const auto& r : rows_reply.at("rows")) {
        rows.push_back(row_from_export(r));
      }
      return rows;
    };
  }
  return app;
}

}  // namespace doa::apps::ride
