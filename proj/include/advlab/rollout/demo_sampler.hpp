#pragma once

#include "advlab/experts/demonstrations.hpp"
#include "advlab/rollout/rollout.hpp"

namespace advlab::rollout {

/// Draws contiguous windows from the demonstration stream (episodes laid end
/// to end). Each window starts from a zero recurrent state and the state is
/// reset again at every episode boundary inside it.
class DemoSampler {
 public:
  DemoSampler(const experts::Demonstration& demo, Index num_actions, std::uint64_t seed);

  /// `windows` windows of `length` steps (clamped to the dataset size),
  /// window starts uniform with replacement.
  Minibatch sample(Index windows, Index length = kSegmentLength);

  std::size_t size() const { return steps_.size(); }

 private:
  std::vector<const experts::DemoStep*> steps_;
  std::vector<std::uint8_t> starts_;
  Index num_actions_;
  Rng rng_;
};

}  // namespace advlab::rollout
