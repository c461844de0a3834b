#pragma once

#include "advlab/diff/ops.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace advlab::envs {

using diff::ActionMask;
using diff::kAllActions;

enum class Encoding {
  PdCategorical,   // one token in {0,1,2,3}
  Lighthouse1D,    // view tuples then action differences
  Lighthouse2D,    // one token: the active index of the 6400-wide one-hot
  CrossingGrid,    // 7*7*3 tokens (type, color, state per cell)
};

/// What a policy sees. Tokens are integer categorical codes; their meaning is
/// fixed by `encoding`.
struct Observation {
  Encoding encoding = Encoding::PdCategorical;
  std::vector<std::int32_t> tokens;
  ActionMask legal = kAllActions;
  std::optional<int> last_action;

  /// FNV-1a over encoding, tokens and mask.
  std::uint64_t hash() const;

  friend bool operator==(const Observation&, const Observation&) = default;
};

/// Number of tokens per observation for encodings with a fixed width.
int tokens_per_observation(Encoding encoding);

}  // namespace advlab::envs
