#pragma once

#include "advlab/envs/env.hpp"
#include "advlab/experts/experts.hpp"
#include "advlab/learn/losses.hpp"
#include "advlab/learn/policy.hpp"

#include <memory>
#include <vector>

namespace advlab::rollout {

using learn::Index;
using learn::Matrix;
using learn::RowVector;

inline constexpr Index kLanes = 20;
inline constexpr Index kSegmentLength = 100;

struct EpisodeStats {
  double reward = 0.0;
  int length = 0;
  bool success = false;
};

/// One collection: `steps` x `lanes` transitions stored time-major
/// (column t*lanes + b).
struct RolloutBuffer {
  Index steps = 0;
  Index lanes = 0;
  std::vector<envs::Observation> observations;
  std::vector<std::uint8_t> resets;  // lane state zeroed before this column
  std::vector<int> actions;
  std::vector<std::uint8_t> forced;  // executed action came from the expert
  RowVector log_probs;               // behaviour log-prob of the executed action
  RowVector rewards;
  std::vector<std::uint8_t> dones;
  RowVector values;
  Matrix expert;     // sampled one-hot expert labels (actions x N), or empty
  Matrix h0, c0;     // recurrent state at segment start
  RowVector bootstrap;  // value of each lane's state after the last step
  RowVector advantages;
  RowVector returns;
  std::vector<EpisodeStats> finished;

  Index size() const { return steps * lanes; }
};

/// Runs `lanes` environments in lock-step and carries episode and recurrent
/// state across collections. Each lane owns its random stream, so a lane's
/// trajectory depends only on its own seed.
class Collector {
 public:
  Collector(const envs::TaskSpec& spec, std::uint64_t experiment_seed, std::uint64_t seed, Index lanes = kLanes,
            Index steps = kSegmentLength);
  /// Collects with the given seeds per lane (lane independence tests).
  Collector(const envs::TaskSpec& spec, std::uint64_t experiment_seed, const std::vector<std::uint64_t>& lane_seeds,
            Index steps = kSegmentLength);

  /// With probability tf a step executes the expert's sampled action instead
  /// of a policy sample. Expert labels are stored when `labels` is set.
  RolloutBuffer collect(const learn::PolicyNet& policy, double tf, const experts::Expert* expert, bool labels);

  Index lanes() const { return static_cast<Index>(envs_.size()); }
  const envs::Env& env(Index lane) const { return *envs_[static_cast<std::size_t>(lane)]; }

 private:
  void start_episode(std::size_t lane);

  std::vector<std::unique_ptr<envs::Env>> envs_;
  std::vector<Rng> rngs_;
  std::vector<std::uint8_t> pending_reset_;
  std::vector<EpisodeStats> running_;
  Index steps_;
  Matrix h_, c_;
  bool state_ready_ = false;
};

/// GAE per lane, filling advantages and returns.
void compute_advantages(RolloutBuffer& buffer, double gamma = 0.99, double lambda = 1.0);

struct Minibatch {
  learn::NetInput input;
  learn::LossBatch targets;
};

/// Full segments of the given lanes, ready for a loss.
Minibatch make_minibatch(const RolloutBuffer& buffer, const std::vector<Index>& lanes);

/// Splits the lanes into `count` equally sized groups after shuffling.
std::vector<std::vector<Index>> lane_partition(Index lanes, Index count, Rng& rng);

}  // namespace advlab::rollout
