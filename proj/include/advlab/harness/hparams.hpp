#pragma once

#include "advlab/learn/methods.hpp"

#include <cstdint>

namespace advlab::harness {

inline constexpr double kLrLow = 1e-4;
inline constexpr double kLrHigh = 0.5;
inline constexpr double kSplitLow = 0.1;
inline constexpr double kSplitHigh = 0.9;
inline constexpr double kAlphaChoices[2] = {5.0, 20.0};

/// lr log-uniform in [1e-4, 0.5); stage_split uniform in [0.1, 0.9); alpha
/// uniform over {5, 20}. Only the method's searched fields are filled in.
learn::MethodConfig sample_hps(learn::MethodId method, std::uint64_t seed);

}  // namespace advlab::harness
