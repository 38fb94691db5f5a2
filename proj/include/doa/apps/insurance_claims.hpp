#pragma once

#include <optional>
#include <string>
#include <vector>

#include "doa/apps/app.hpp"

namespace doa::apps::claims {

struct Claim {
  Int claim_id = 0;
  std::string kind;
  double amount = 0.0;
  Int prior_claims = 0;
  bool flagged = false;
};

inline const std::vector<std::string> kKinds = {"auto", "home", "health"};

/// The three rules of the chain. Each returns a decision or nothing when the
/// claim falls through to the next rule. Unknown kinds and negative amounts
/// throw std::invalid_argument.
std::optional<std::string> fraud_rule(const Claim& claim);
std::optional<std::string> amount_rule(const Claim& claim);
std::string fast_track_rule(const Claim& claim);

/// reject, manual_review, fast_track or standard.
std::string claim_route(const Claim& claim);

struct Payout {
  std::string process;
  double amount = 0.0;
};

/// Nothing for rejected claims.
std::optional<Payout> payout_for(const std::string& decision, double amount);

/// Feature names in model column order.
inline const std::vector<std::string> kClaimFeatures = {
    "claims.kind=auto", "claims.kind=home", "claims.kind=health",
    "claims.amount",    "claims.prior_claims", "claims.flagged"};

/// One-hot kind, amount, prior claims, flagged as 0/1.
std::vector<double> claim_features(const Claim& claim);

CollectionSpec collection_spec();

FbpApp build_fbp(Stage stage, const BuildOptions& options);
SoaApp build_soa(Stage stage, const BuildOptions& options);

}  // namespace doa::apps::claims
