#include <cmath>
#include <optional>

#include "doa/ml/ml.hpp"

namespace doa::ml {

namespace {

using Matrix = std::vector<std::vector<double>>;

/// Gaussian elimination with partial pivoting. nullopt when a pivot falls
/// below the relative tolerance.
std::optional<std::vector<double>> solve(Matrix a, std::vector<double> b) {
  const std::size_t n = b.size();
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(a[i][i]));
  const double tol = 1e-12 * std::max(scale, 1.0);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) < tol) return std::nullopt;
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

}  // namespace

LinearModel fit_linear(std::span<const LinearSample> rows) {
  if (rows.empty()) throw MlError("fit_linear: no rows");
  const std::size_t d = rows.front().features.size();
  for (const auto& r : rows) {
    if (r.features.size() != d) throw MlError("fit_linear: inconsistent feature dimensions");
  }
  const double n = static_cast<double>(rows.size());

  std::vector<double> mean_x(d, 0.0);
  double mean_y = 0.0;
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < d; ++j) mean_x[j] += r.features[j] / n;
    mean_y += r.label / n;
  }
  if (d == 0) return LinearModel{{}, mean_y};

  Matrix xtx(d, std::vector<double>(d, 0.0));
  std::vector<double> xty(d, 0.0);
  for (const auto& r : rows) {
    const double y = r.label - mean_y;
    for (std::size_t i = 0; i < d; ++i) {
      const double xi = r.features[i] - mean_x[i];
      xty[i] += xi * y;
      for (std::size_t j = 0; j < d; ++j) xtx[i][j] += xi * (r.features[j] - mean_x[j]);
    }
  }

  auto beta = solve(xtx, xty);
  if (!beta) {
    constexpr double kRidge = 1e-8;
    for (std::size_t i = 0; i < d; ++i) xtx[i][i] += kRidge;
    beta = solve(xtx, xty);
    if (!beta) throw MlError("fit_linear: system is singular even with ridge penalty");
  }

  LinearModel model{*beta, mean_y};
  for (std::size_t j = 0; j < d; ++j) model.intercept -= model.coefficients[j] * mean_x[j];
  return model;
}

double predict_linear(const LinearModel& model, std::span<const double> features) {
  if (features.size() != model.coefficients.size()) {
    throw MlError("predict_linear: expected " + std::to_string(model.coefficients.size()) +
                  " features, got " + std::to_string(features.size()));
  }
  double y = model.intercept;
  for (std::size_t i = 0; i < features.size(); ++i) y += model.coefficients[i] * features[i];
  return y;
}

}  // namespace doa::ml
