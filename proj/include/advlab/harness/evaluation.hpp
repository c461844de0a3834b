#pragma once

#include "advlab/envs/task.hpp"
#include "advlab/harness/seeds.hpp"
#include "advlab/learn/policy.hpp"

#include <cstdint>

namespace advlab::harness {

struct EvalMetrics {
  double mean_reward = 0.0;
  double success_rate = 0.0;
  double mean_length = 0.0;
  int episodes = 0;
};

/// Greedy (argmax) rollouts on episodes first_seed, first_seed+1, ...; all
/// episodes run side by side as lanes of one batch.
EvalMetrics evaluate_policy(const learn::PolicyNet& policy, const envs::TaskSpec& task, int n_episodes,
                            std::uint64_t experiment_seed, std::uint64_t first_seed = kValidationSeedBegin);

}  // namespace advlab::harness
