#include "doa/apps/insurance_claims.hpp"

#include <algorithm>
#include <stdexcept>

#include "common.hpp"

namespace doa::apps::claims {

using namespace detail;

namespace {

void check_claim(const Claim& c) {
  if (std::find(kKinds.begin(), kKinds.end(), c.kind) == kKinds.end()) {
    throw std::invalid_argument("unknown claim kind '" + c.kind + "'");
  }
  if (c.amount < 0.0) throw std::invalid_argument("negative claim amount");
}

}  // namespace

std::optional<std::string> fraud_rule(const Claim& claim) {
  check_claim(claim);
  if (claim.flagged) return "reject";
  return std::nullopt;
}

std::optional<std::string> amount_rule(const Claim& claim) {
  check_claim(claim);
  if (claim.amount > 10000.0) return "manual_review";
  return std::nullopt;
}

std::string fast_track_rule(const Claim& claim) {
  check_claim(claim);
  if (claim.kind == "auto" && claim.amount <= 1000.0 && claim.prior_claims <= 2) {
    return "fast_track";
  }
  return "standard";
}

std::string claim_route(const Claim& claim) {
  if (auto d = fraud_rule(claim)) return *d;
  if (auto d = amount_rule(claim)) return *d;
  return fast_track_rule(claim);
}

std::optional<Payout> payout_for(const std::string& decision, double amount) {
  if (decision == "reject") return std::nullopt;
  if (decision == "manual_review") return Payout{"manual", amount * 0.8};
  if (decision == "fast_track") return Payout{"instant", amount};
  if (decision == "standard") return Payout{"standard", amount * 0.9};
  throw std::invalid_argument("unknown decision '" + decision + "'");
}

std::vector<double> claim_features(const Claim& claim) {
  check_claim(claim);
  return {claim.kind == "auto" ? 1.0 : 0.0,
          claim.kind == "home" ? 1.0 : 0.0,
          claim.kind == "health" ? 1.0 : 0.0,
          claim.amount,
          static_cast<double>(claim.prior_claims),
          claim.flagged ? 1.0 : 0.0};
}

CollectionSpec collection_spec() {
  return {{"routed_claims", {"decision"}, "claim_id"},
          {{"claims", {"kind", "amount", "prior_claims", "flagged"}, "claim_id"}},
          "claim_decisions"};
}

namespace {

const std::vector<Field> kClaimFields = {{"claim_id", FieldType::Int},
                                         {"kind", FieldType::Text},
                                         {"amount", FieldType::Float},
                                         {"prior_claims", FieldType::Int},
                                         {"flagged", FieldType::Bool}};

const Schema kClaim("claim", kClaimFields);
const Schema kTriage("triage", [] {
  auto f = kClaimFields;
  f.push_back({"decision", FieldType::Text});
  return f;
}());
const Schema kDecision("decision", {{"claim_id", FieldType::Int}, {"decision", FieldType::Text}});
const Schema kPayout("payout", {{"claim_id", FieldType::Int},
                                {"process", FieldType::Text},
                                {"payout", FieldType::Float}});

Claim claim_of(const PortView& v, const Record& r) {
  return {v.get<Int>(r, "claim_id"), v.get<std::string>(r, "kind"), v.get<double>(r, "amount"),
          v.get<Int>(r, "prior_claims"), v.get<bool>(r, "flagged")};
}

Row triage_row(const Claim& c, const std::string& decision) {
  return {c.claim_id, c.kind, c.amount, c.prior_claims, c.flagged, decision};
}

Claim claim_of(const Document& d) {
  return {field<Int>(d, "claim_id"), field<std::string>(d, "kind"), field<double>(d, "amount"),
          field<Int>(d, "prior_claims"), field<bool>(d, "flagged")};
}

NodeOutput fraud_node(const NodeInput& in) {
  const PortView& v = in["claims"];
  NodeOutput out;
  for (const Record& r : v.delta()) {
    const Claim c = claim_of(v, r);
    out["triage"].push_back(triage_row(c, fraud_rule(c).value_or("")));
  }
  return out;
}

/// Passes decided claims through untouched, applies `rule` to the rest.
template <auto Rule>
NodeOutput chain_node(const NodeInput& in) {
  const PortView& v = in["triage"];
  NodeOutput out;
  for (const Record& r : v.delta()) {
    const Claim c = claim_of(v, r);
    std::string decision = v.get<std::string>(r, "decision");
    if (decision.empty()) {
      if constexpr (std::is_same_v<decltype(Rule(c)), std::string>) {
        decision = Rule(c);
      } else {
        decision = Rule(c).value_or("");
      }
    }
    out["triage"].push_back(triage_row(c, decision));
  }
  return out;
}

NodeOutput decision_notifier(const NodeInput& in) {
  const PortView& v = in["routed"];
  NodeOutput out;
  auto& rows = out["decisions"];
  for (const Record& r : v.delta()) {
    rows.push_back({v.get<Int>(r, "claim_id"), v.get<std::string>(r, "decision")});
  }
  return out;
}

NodeOutput payout_processor(const NodeInput& in) {
  const PortView& v = in["routed"];
  NodeOutput out;
  auto& rows = out["payouts"];
  for (const Record& r : v.delta()) {
    if (auto p = payout_for(v.get<std::string>(r, "decision"), v.get<double>(r, "amount"))) {
      rows.push_back({v.get<Int>(r, "claim_id"), p->process, p->amount});
    }
  }
  return out;
}

Transform classifier(std::optional<ml::TreeModel> model) {
  return [model = std::move(model)](const NodeInput& in) {
    const PortView& v = in["claims"];
    NodeOutput out;
    auto& rows = out["routed"];
    if (v.delta().empty()) return out;
    if (!model) throw ml::MlError("claim routing model not loaded");
    for (const Record& r : v.delta()) {
      const Claim c = claim_of(v, r);
      rows.push_back(triage_row(c, ml::predict_tree(*model, claim_features(c))));
    }
    return out;
  };
}

}  // namespace

FbpApp build_fbp(Stage stage, const BuildOptions& options) {
  FbpApp app;
  FlowGraph& g = app.graph;
  g.add_stream({"claims", StreamCategory::Input, kClaim});
  g.add_stream({"routed_claims", StreamCategory::Internal, kTriage});
  g.add_stream({"decisions", StreamCategory::Output, kDecision});
  g.add_stream({"payouts", StreamCategory::Output, kPayout});

  if (stage == Stage::Ml) {
    g.add_node({"claim_classifier",
                {in_port("claims", kClaim)},
                {out_port("routed", kTriage)},
                classifier(options.models.claim_router),
                "1"},
               {{"claims", "claims"}}, {{"routed", "routed_claims"}});
  } else {
    g.add_stream({"after_fraud", StreamCategory::Internal, kTriage});
    g.add_stream({"after_amount", StreamCategory::Internal, kTriage});
    g.add_node({"fraud_rule", {in_port("claims", kClaim)}, {out_port("triage", kTriage)},
                fraud_node, "1"},
               {{"claims", "claims"}}, {{"triage", "after_fraud"}});
    g.add_node({"amount_rule", {in_port("triage", kTriage)}, {out_port("triage", kTriage)},
                chain_node<amount_rule>, "1"},
               {{"triage", "after_fraud"}}, {{"triage", "after_amount"}});
    g.add_node({"fast_track_rule", {in_port("triage", kTriage)}, {out_port("triage", kTriage)},
                chain_node<fast_track_rule>, "1"},
               {{"triage", "after_amount"}}, {{"triage", "routed_claims"}});
  }
  g.add_node({"decision_notifier", {in_port("routed", kTriage)},
              {out_port("decisions", kDecision)}, decision_notifier, "1"},
             {{"routed", "routed_claims"}}, {{"decisions", "decisions"}});
  g.add_node({"payout_processor", {in_port("routed", kTriage)}, {out_port("payouts", kPayout)},
              payout_processor, "1"},
             {{"routed", "routed_claims"}}, {{"payouts", "payouts"}});
  app.channels = {"decisions", "payouts"};

  if (stage != Stage::Min) {
    app.collection = collection_spec();
    add_collector(g, *app.collection, "claim_collector", "1");
  }
  return app;
}

// ---------------------------------------------------------------------------
// SOA: intake, rules and payout services

namespace {

const std::set<std::string> kClaimKeys = {"amount", "claim_id", "flagged", "kind", "prior_claims"};

soa::ServiceSpec intake_service(Stage stage) {
  const bool data = stage != Stage::Min;
  const bool ml = stage == Stage::Ml;
  soa::ServiceSpec s;
  s.id = "intake";
  s.apis.push_back(
      {"submit_claim", sig(kClaimKeys, {"claim_id", "decision", "payout", "process"}),
       ml ? "3" : (data ? "2" : "1"),
       [data, ml](const Document& req, soa::ServiceContext& ctx) {
         std::string decision;
         if (ml) {
           decision = field<std::string>(ctx.call("rules", "classify", req), "decision");
         } else {
           decision = field<std::string>(ctx.call("rules", "check_fraud", req), "decision");
           if (decision.empty()) {
             decision = field<std::string>(ctx.call("rules", "check_amount", req), "decision");
           }
           if (decision.empty()) {
             decision = field<std::string>(ctx.call("rules", "check_fast_track", req), "decision");
           }
         }
         Document claim = req;
         claim["decision"] = decision;
         ctx.run("save_claim", claim);
         if (data) ctx.run("save_labeled", claim);
         const Document p = ctx.call(
             "payout", "process_payout",
             {{"amount", req.at("amount")}, {"claim_id", req.at("claim_id")}, {"decision", decision}});
         return Document{{"claim_id", req.at("claim_id")},
                         {"decision", decision},
                         {"payout", p.at("payout")},
                         {"process", p.at("process")}};
       }});
  auto claim_fields = kClaimKeys;
  claim_fields.insert("decision");
  s.routines.push_back({"save_claim", sig(claim_fields, {}), "1",
                        [](soa::Store& st, const Document& args) {
                          st.put("claims", key_of(field<Int>(args, "claim_id")), args);
                          return empty();
                        }});
  if (!data) return s;

  s.apis.push_back({"export_dataset", sig({}, {"rows"}), "1",
                    [](const Document&, soa::ServiceContext& ctx) {
                      return ctx.run("load_labeled", empty());
                    }});
  s.routines.push_back({"save_labeled", sig(claim_fields, {}), "1",
                        [](soa::Store& st, const Document& args) {
                          st.put("labeled", seq_key(st.size("labeled")), args);
                          return empty();
                        }});
  s.routines.push_back({"load_labeled", sig({}, {"rows"}), "1",
                        [](soa::Store& st, const Document&) {
                          Document rows = Document::array();
                          for (const auto& [k, c] : st.scan("labeled")) {
                            rows.push_back({{"key", c.at("claim_id")},
                                            {"features",
                                             {{"claims.amount", c.at("amount")},
                                              {"claims.flagged", c.at("flagged")},
                                              {"claims.kind", c.at("kind")},
                                              {"claims.prior_claims", c.at("prior_claims")}}},
                                            {"label", {{"decision", c.at("decision")}}}});
                          }
                          return Document{{"rows", rows}};
                        }});
  return s;
}

soa::ServiceSpec rules_service(Stage stage, std::optional<ml::TreeModel> model) {
  soa::ServiceSpec s;
  s.id = "rules";
  auto decided = [](std::optional<std::string> d) {
    return Document{{"decision", d.value_or("")}};
  };
  if (stage != Stage::Ml) {
    s.apis.push_back({"check_fraud", sig(kClaimKeys, {"decision"}), "1",
                      [decided](const Document& req, soa::ServiceContext&) {
                        return decided(fraud_rule(claim_of(req)));
                      }});
    s.apis.push_back({"check_amount", sig(kClaimKeys, {"decision"}), "1",
                      [decided](const Document& req, soa::ServiceContext&) {
                        return decided(amount_rule(claim_of(req)));
                      }});
    s.apis.push_back({"check_fast_track", sig(kClaimKeys, {"decision"}), "1",
                      [](const Document& req, soa::ServiceContext&) {
                        return Document{{"decision", fast_track_rule(claim_of(req))}};
                      }});
    return s;
  }
  s.bootstrap = [model](soa::Store& st) {
    if (model) st.put("models", "claim_router", ml::to_document(*model));
  };
  s.apis.push_back({"classify", sig(kClaimKeys, {"decision"}), "1",
                    [](const Document& req, soa::ServiceContext& ctx) {
                      const Document m = ctx.run("load_model", empty()).at("model");
                      if (m.is_null()) throw ml::MlError("claim routing model not loaded");
                      const auto tree = ml::tree_from_document(m);
                      return Document{
                          {"decision", ml::predict_tree(tree, claim_features(claim_of(req)))}};
                    }});
  s.routines.push_back({"load_model", sig({}, {"model"}), "1",
                        [](soa::Store& st, const Document&) {
                          return Document{
                              {"model", st.get("models", "claim_router").value_or(nullptr)}};
                        }});
  return s;
}

soa::ServiceSpec payout_service() {
  soa::ServiceSpec s;
  s.id = "payout";
  s.apis.push_back({"process_payout", sig({"amount", "claim_id", "decision"}, {"payout", "process"}),
                    "1", [](const Document& req, soa::ServiceContext& ctx) {
                      const auto p = payout_for(field<std::string>(req, "decision"),
                                                field<double>(req, "amount"));
                      if (!p) return Document{{"payout", nullptr}, {"process", nullptr}};
                      ctx.run("save_payout", {{"claim_id", req.at("claim_id")},
                                              {"payout", p->amount},
                                              {"process", p->process}});
                      return Document{{"payout", p->amount}, {"process", p->process}};
                    }});
  s.routines.push_back({"save_payout", sig({"claim_id", "payout", "process"}, {}), "1",
                        [](soa::Store& st, const Document& args) {
                          st.put("payouts", key_of(field<Int>(args, "claim_id")), args);
                          return empty();
                        }});
  return s;
}

}  // namespace

SoaApp build_soa(Stage stage, const BuildOptions& options) {
  SoaApp app;
  app.services = {intake_service(stage), rules_service(stage, options.models.claim_router),
                  payout_service()};
  app.channels = {"decisions", "payouts"};
  app.deliver = [](soa::Registry& reg, const Event& ev, ChannelOutputs& out) {
    if (ev.kind != "claims") {
      throw std::invalid_argument("insurance_claims has no event kind '" + ev.kind + "'");
    }
    const Document r = reg.call("sim", "intake", "submit_claim", ev.payload);
    out["decisions"].push_back(
        with_tick({{"claim_id", r.at("claim_id")}, {"decision", r.at("decision")}}, ev.tick));
    if (!r.at("process").is_null()) {
      out["payouts"].push_back(with_tick({{"claim_id", r.at("claim_id")},
                                          {"payout", r.at("payout")},
                                          {"process", r.at("process")}},
                                         ev.tick));
    }
  };
  if (stage != Stage::Min) {
    app.export_dataset = [](soa::Registry& reg) {
      std::vector<DatasetRow> rows;
      const Document rows_reply = reg.call("sim", "intake", "export_dataset", empty());
      for (const auto& r : rows_reply.at("rows")) {
        rows.push_back(row_from_export(r));
      }
      return rows;
    };
  }
  return app;
}

}  // namespace doa::apps::claims
