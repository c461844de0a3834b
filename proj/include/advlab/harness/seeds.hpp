#pragma once

#include "advlab/diff/random.hpp"

#include <cstdint>

namespace advlab::harness {

// Episode seed ranges. Training draws from [0, 1e6); validation episodes
// count up from 1e6 (200 of them by default).
inline constexpr std::uint64_t kTrainSeedEnd = 1'000'000;
inline constexpr std::uint64_t kValidationSeedBegin = 1'000'000;
inline constexpr std::uint64_t kValidationSeedCount = 200;

static_assert(kValidationSeedBegin >= kTrainSeedEnd, "validation and training seeds overlap");

inline std::uint64_t training_episode_seed(Rng& rng) {
  return static_cast<std::uint64_t>(rng.integer(0, static_cast<std::int64_t>(kTrainSeedEnd)));
}

inline std::uint64_t validation_episode_seed(std::uint64_t k) {
  return kValidationSeedBegin + k;
}

}  // namespace advlab::harness
