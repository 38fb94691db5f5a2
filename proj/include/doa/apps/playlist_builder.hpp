#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "doa/apps/app.hpp"

namespace doa::apps::playlist {

struct Movie {
  std::string title;
  std::string genre;
  double gross = 0.0;
};

inline constexpr double kGrossQuantile = 0.75;

/// Uniform sample without replacement of min(k, n) titles among the genre's
/// movies (gross >= min_gross when given), drawn with Rng(seed) over the
/// candidates sorted by title.
std::vector<std::string> build_playlist(const std::string& genre, const std::vector<Movie>& movies,
                                        Int k, std::uint64_t seed,
                                        std::optional<double> min_gross = std::nullopt);

/// "a|b|c"
std::string join_titles(const std::vector<std::string>& titles);

FbpApp build_fbp(Stage stage, const BuildOptions& options);
SoaApp build_soa(Stage stage, const BuildOptions& options);

}  // namespace doa::apps::playlist
