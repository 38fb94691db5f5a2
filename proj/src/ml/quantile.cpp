#include <algorithm>
#include <cmath>

#include "doa/ml/ml.hpp"

namespace doa::ml {

QuantileSketch::QuantileSketch(std::vector<double> values) : sorted_(std::move(values)) {
  std::sort(sorted_.begin(), sorted_.end());
}

void QuantileSketch::add(double value) {
  sorted_.insert(std::upper_bound(sorted_.begin(), sorted_.end(), value), value);
}

double quantile(const QuantileSketch& sketch, double q) {
  if (sketch.empty()) throw MlError("quantile of an empty sketch");
  if (!(q >= 0.0 && q <= 1.0)) throw MlError("quantile level must lie in [0, 1]");
  const double n = static_cast<double>(sketch.size());
  // The epsilon absorbs products like 0.3 * 10 = 3.0000000000000004.
  auto rank = static_cast<std::size_t>(std::ceil(q * n - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, sketch.size());
  return sketch.values()[rank - 1];
}

}  // namespace doa::ml
