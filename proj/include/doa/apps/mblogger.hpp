#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "doa/apps/app.hpp"

namespace doa::apps::mblogger {

struct Follow {
  Int follower = 0;
  Int followee = 0;
  Tick tick = 0;
};

struct Post {
  Int post_id = 0;
  Int author = 0;
  std::string text;
  Tick tick = 0;
};

inline constexpr std::size_t kTimelineLimit = 50;
inline constexpr std::size_t kBotMaxLen = 20;

/// Posts whose author `user` followed at or before the post's tick, newest
/// first by (tick, post_id), at most `limit` of them.
std::vector<Int> timeline(Int user, const std::vector<Follow>& follows,
                          const std::vector<Post>& posts, std::size_t limit = kTimelineLimit);

/// Followers of `author` as of `tick`, ascending.
std::vector<Int> followers_at(Int author, Tick tick, const std::vector<Follow>& follows);

/// "12,7,3"
std::string join_ids(const std::vector<Int>& ids);

std::uint64_t bot_seed(std::uint64_t run_seed, Tick tick, Int user);

/// Fits a bigram model on the corpus and generates one post from `seed`.
std::string bot_post(const std::vector<std::string>& corpus, std::uint64_t seed);

FbpApp build_fbp(Stage stage, const BuildOptions& options);
SoaApp build_soa(Stage stage, const BuildOptions& options);

}  // namespace doa::apps::mblogger
