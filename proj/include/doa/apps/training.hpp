#pragma once

#include <vector>

#include "doa/apps/app.hpp"
#include "doa/apps/insurance_claims.hpp"

namespace doa::apps {

inline constexpr int kClaimTreeDepth = 4;

std::vector<ml::LinearSample> wait_samples(const std::vector<DatasetRow>& rows);
ml::LinearModel fit_wait_model(const std::vector<DatasetRow>& rows);

claims::Claim claim_from_row(const DatasetRow& row);
std::vector<ml::TreeSample> claim_samples(const std::vector<DatasetRow>& rows);
ml::TreeModel fit_claim_model(const std::vector<DatasetRow>& rows);

/// Fits whatever model the app's ml stage loads; empty for apps without one.
Models fit_models(AppId app, const std::vector<DatasetRow>& rows);

}  // namespace doa::apps
