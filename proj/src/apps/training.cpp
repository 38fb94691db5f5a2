#include "doa/apps/training.hpp"

#include "doa/apps/ride_allocation.hpp"

namespace doa::apps {

namespace {

double number(const Value& v) {
  if (const auto* i = std::get_if<Int>(&v)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&v)) return *d;
  throw ml::MlError("dataset value " + to_display(v) + " is not numeric");
}

const Value& at(const std::map<std::string, Value>& m, const std::string& key) {
  auto it = m.find(key);
  if (it == m.end()) throw ml::MlError("dataset row has no field '" + key + "'");
  return it->second;
}

}  // namespace

std::vector<ml::LinearSample> wait_samples(const std::vector<DatasetRow>& rows) {
  std::vector<ml::LinearSample> out;
  for (const auto& r : rows) {
    ml::LinearSample s;
    for (const auto& name : ride::kWaitFeatures) s.features.push_back(number(at(r.features, name)));
    s.label = number(at(r.label, "wait_time"));
    out.push_back(std::move(s));
  }
  return out;
}

ml::LinearModel fit_wait_model(const std::vector<DatasetRow>& rows) {
  return ml::fit_linear(wait_samples(rows));
}

claims::Claim claim_from_row(const DatasetRow& row) {
  claims::Claim c;
  if (const auto* id = std::get_if<Int>(&row.key)) c.claim_id = *id;
  c.kind = std::get<std::string>(at(row.features, "claims.kind"));
  c.amount = number(at(row.features, "claims.amount"));
  c.prior_claims = std::get<Int>(at(row.features, "claims.prior_claims"));
  c.flagged = std::get<bool>(at(row.features, "claims.flagged"));
  return c;
}

std::vector<ml::TreeSample> claim_samples(const std::vector<DatasetRow>& rows) {
  std::vector<ml::TreeSample> out;
  for (const auto& r : rows) {
    out.push_back({claims::claim_features(claim_from_row(r)),
                   std::get<std::string>(at(r.label, "decision"))});
  }
  return out;
}

ml::TreeModel fit_claim_model(const std::vector<DatasetRow>& rows) {
  return ml::fit_tree(claim_samples(rows), kClaimTreeDepth);
}

Models fit_models(AppId app, const std::vector<DatasetRow>& rows) {
  Models m;
  if (app == AppId::RideAllocation) m.wait_time = fit_wait_model(rows);
  if (app == AppId::InsuranceClaims) m.claim_router = fit_claim_model(rows);
  return m;
}

}  // namespace doa::apps
