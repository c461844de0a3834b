#pragma once

#include "advlab/diff/adam.hpp"
#include "advlab/envs/task.hpp"
#include "advlab/harness/records.hpp"
#include "advlab/learn/losses.hpp"
#include "advlab/learn/methods.hpp"
#include "advlab/learn/policy.hpp"
#include "advlab/rollout/rollout.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>

namespace advlab::harness {

struct TrainConfig {
  envs::TaskSpec task;
  learn::MethodConfig method;
  std::uint64_t hp_seed = 0;
  std::int64_t budget_steps = 300'000;
  std::uint64_t seed = 0;

  int validation_episodes = 200;
  double validation_every = 0.05;  // fraction of the budget
  int demo_episodes = 500;
  int epochs = 4;
  int minibatches = 2;
  double max_grad_norm = 0.5;
  double clip_eps = 0.1;
  std::optional<std::filesystem::path> checkpoint;

  /// Called after every optimisation step with its inputs and loss.
  std::function<void(const rollout::Minibatch&, const learn::LossResult&, bool demo)> on_update;
};

struct TrainResult {
  RunRecord record;
  std::unique_ptr<learn::PolicyNet> policy;
};

/// Runs the method's stage schedule for budget_steps environment steps
/// (demo-only stages count 2000 steps per update), validating greedily at
/// step 0 and every validation_every * budget. A non-finite loss stops the
/// run and marks the record failed.
TrainResult run_training(const TrainConfig& config);

/// One optimiser step on a minibatch; returns the loss (gradients are
/// clipped to max_grad_norm first).
learn::LossResult optimise_minibatch(learn::PolicyNet& policy, diff::Adam& adam, const rollout::Minibatch& mb,
                                     const learn::LossConfig& loss, double lr, double max_grad_norm);

/// Metadata stored with checkpoints: task spec, method and seed.
std::string checkpoint_metadata(const TrainConfig& config);
struct CheckpointInfo {
  envs::TaskSpec task;
  std::string method;
  std::uint64_t seed = 0;
};
CheckpointInfo parse_checkpoint_metadata(const std::string& metadata);

}  // namespace advlab::harness
