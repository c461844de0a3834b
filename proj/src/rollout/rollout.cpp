#include "advlab/rollout/rollout.hpp"

#include "advlab/diff/ops.hpp"
#include "advlab/harness/seeds.hpp"
#include "advlab/learn/advantage.hpp"

#include <numeric>
#include <stdexcept>

namespace advlab::rollout {

Collector::Collector(const envs::TaskSpec& spec, std::uint64_t experiment_seed, std::uint64_t seed, Index lanes,
                     Index steps)
    : Collector(spec, experiment_seed,
                [&] {
                  std::vector<std::uint64_t> seeds;
                  for (Index b = 0; b < lanes; ++b) seeds.push_back(Rng::mix(seed * 1000003ULL + static_cast<std::uint64_t>(b)));
                  return seeds;
                }(),
                steps) {}

Collector::Collector(const envs::TaskSpec& spec, std::uint64_t experiment_seed,
                     const std::vector<std::uint64_t>& lane_seeds, Index steps)
    : steps_(steps) {
  if (lane_seeds.empty() || steps < 1) throw std::invalid_argument("Collector: need at least one lane and step");
  for (std::uint64_t s : lane_seeds) {
    envs_.push_back(envs::make_env(spec, experiment_seed));
    rngs_.emplace_back(s, 0x1A7E);
  }
  pending_reset_.assign(lane_seeds.size(), 1);
  running_.assign(lane_seeds.size(), {});
  for (std::size_t b = 0; b < envs_.size(); ++b) start_episode(b);
}

void Collector::start_episode(std::size_t lane) {
  envs_[lane]->reset(harness::training_episode_seed(rngs_[lane]));
  pending_reset_[lane] = 1;
  running_[lane] = {};
}

RolloutBuffer Collector::collect(const learn::PolicyNet& policy, double tf, const experts::Expert* expert,
                                 bool labels) {
  if (tf < 0.0 || tf > 1.0) throw std::invalid_argument("collect: teacher forcing outside [0,1]");
  if ((labels || tf > 0.0) && expert == nullptr) throw std::invalid_argument("collect: expert required but missing");
  const Index L = lanes();
  const Index A = policy.num_actions();
  if (!state_ready_) {
    h_ = policy.initial_state(L);
    c_ = policy.initial_state(L);
    state_ready_ = true;
  }

  RolloutBuffer buf;
  buf.steps = steps_;
  buf.lanes = L;
  const Index N = steps_ * L;
  buf.observations.reserve(static_cast<std::size_t>(N));
  buf.resets.resize(static_cast<std::size_t>(N));
  buf.actions.resize(static_cast<std::size_t>(N));
  buf.forced.resize(static_cast<std::size_t>(N));
  buf.dones.resize(static_cast<std::size_t>(N));
  buf.log_probs.resize(N);
  buf.rewards.resize(N);
  buf.values.resize(N);
  if (labels) buf.expert = Matrix::Zero(A, N);
  buf.h0 = h_;
  buf.c0 = c_;

  learn::NetInput step_in;
  step_in.steps = 1;
  step_in.lanes = L;
  for (Index t = 0; t < steps_; ++t) {
    step_in.observations.clear();
    step_in.resets.assign(pending_reset_.begin(), pending_reset_.end());
    for (Index b = 0; b < L; ++b) step_in.observations.push_back(envs_[static_cast<std::size_t>(b)]->observe());
    step_in.h0 = h_;
    step_in.c0 = c_;
    learn::NetOutput out = policy.forward(step_in, false);
    h_ = std::move(out.h);
    c_ = std::move(out.c);

    for (Index b = 0; b < L; ++b) {
      const auto lane = static_cast<std::size_t>(b);
      const Index col = t * L + b;
      auto& env = *envs_[lane];
      auto& rng = rngs_[lane];
      int expert_action = -1;
      if (labels || tf > 0.0) {
        expert_action = experts::sample_action(expert->distribution(env), rng);
        if (labels) buf.expert(expert_action, col) = 1.0;
      }
      const bool force = tf > 0.0 && rng.bernoulli(tf);
      const int action = force ? expert_action : rng.categorical(out.main_probs.col(b));
      const auto r = env.step(action);

      buf.observations.push_back(std::move(step_in.observations[lane]));
      buf.resets[static_cast<std::size_t>(col)] = pending_reset_[lane];
      buf.actions[static_cast<std::size_t>(col)] = action;
      buf.forced[static_cast<std::size_t>(col)] = force;
      buf.log_probs(col) = diff::clamped_log(out.main_probs(action, b));
      buf.rewards(col) = r.reward;
      buf.values(col) = out.values(b);
      buf.dones[static_cast<std::size_t>(col)] = r.done;
      pending_reset_[lane] = 0;

      auto& stats = running_[lane];
      stats.reward += r.reward;
      stats.length += 1;
      if (r.done) {
        stats.success = env.succeeded();
        buf.finished.push_back(stats);
        start_episode(lane);
      }
    }
  }

  // Bootstrap values for the state after the segment; the carried recurrent
  // state is left untouched.
  step_in.observations.clear();
  step_in.resets.assign(pending_reset_.begin(), pending_reset_.end());
  for (Index b = 0; b < L; ++b) step_in.observations.push_back(envs_[static_cast<std::size_t>(b)]->observe());
  step_in.h0 = h_;
  step_in.c0 = c_;
  buf.bootstrap = policy.forward(step_in, false).values;
  return buf;
}

void compute_advantages(RolloutBuffer& buffer, double gamma, double lambda) {
  const Index L = buffer.lanes, T = buffer.steps;
  buffer.advantages.resize(buffer.size());
  buffer.returns.resize(buffer.size());
  std::vector<double> rewards(static_cast<std::size_t>(T)), values(static_cast<std::size_t>(T));
  std::vector<bool> dones(static_cast<std::size_t>(T));
  for (Index b = 0; b < L; ++b) {
    for (Index t = 0; t < T; ++t) {
      const Index col = t * L + b;
      rewards[static_cast<std::size_t>(t)] = buffer.rewards(col);
      values[static_cast<std::size_t>(t)] = buffer.values(col);
      dones[static_cast<std::size_t>(t)] = buffer.dones[static_cast<std::size_t>(col)] != 0;
    }
    const auto r = learn::gae_advantages(rewards, values, dones, buffer.bootstrap(b), gamma, lambda);
    for (Index t = 0; t < T; ++t) {
      buffer.advantages(t * L + b) = r.advantages[static_cast<std::size_t>(t)];
      buffer.returns(t * L + b) = r.returns[static_cast<std::size_t>(t)];
    }
  }
}

Minibatch make_minibatch(const RolloutBuffer& buffer, const std::vector<Index>& lanes) {
  const Index L = static_cast<Index>(lanes.size());
  const Index T = buffer.steps;
  const Index N = T * L;
  Minibatch mb;
  mb.input.steps = T;
  mb.input.lanes = L;
  mb.input.observations.reserve(static_cast<std::size_t>(N));
  mb.input.resets.resize(static_cast<std::size_t>(N));
  auto& tg = mb.targets;
  tg.actions.resize(static_cast<std::size_t>(N));
  tg.old_log_probs.resize(N);
  tg.advantages.resize(N);
  tg.returns.resize(N);
  const bool labels = buffer.expert.cols() > 0;
  if (labels) tg.expert.resize(buffer.expert.rows(), N);
  const bool recurrent = buffer.h0.rows() > 0;
  if (recurrent) {
    mb.input.h0.resize(buffer.h0.rows(), L);
    mb.input.c0.resize(buffer.c0.rows(), L);
  }
  for (Index j = 0; j < L; ++j) {
    const Index b = lanes[static_cast<std::size_t>(j)];
    if (b < 0 || b >= buffer.lanes) throw std::out_of_range("make_minibatch: bad lane");
    if (recurrent) {
      mb.input.h0.col(j) = buffer.h0.col(b);
      mb.input.c0.col(j) = buffer.c0.col(b);
    }
  }
  for (Index t = 0; t < T; ++t) {
    for (Index j = 0; j < L; ++j) {
      const Index src = t * buffer.lanes + lanes[static_cast<std::size_t>(j)];
      const Index dst = t * L + j;
      mb.input.observations.push_back(buffer.observations[static_cast<std::size_t>(src)]);
      mb.input.resets[static_cast<std::size_t>(dst)] = buffer.resets[static_cast<std::size_t>(src)];
      tg.actions[static_cast<std::size_t>(dst)] = buffer.actions[static_cast<std::size_t>(src)];
      tg.old_log_probs(dst) = buffer.log_probs(src);
      tg.advantages(dst) = buffer.advantages.size() ? buffer.advantages(src) : 0.0;
      tg.returns(dst) = buffer.returns.size() ? buffer.returns(src) : 0.0;
      if (labels) tg.expert.col(dst) = buffer.expert.col(src);
    }
  }
  return mb;
}

std::vector<std::vector<Index>> lane_partition(Index lanes, Index count, Rng& rng) {
  if (count < 1 || lanes % count != 0) throw std::invalid_argument("lane_partition: lanes must split evenly");
  std::vector<Index> order(static_cast<std::size_t>(lanes));
  std::iota(order.begin(), order.end(), Index{0});
  rng.shuffle(order);
  std::vector<std::vector<Index>> groups(static_cast<std::size_t>(count));
  const Index per = lanes / count;
  for (Index i = 0; i < lanes; ++i) groups[static_cast<std::size_t>(i / per)].push_back(order[static_cast<std::size_t>(i)]);
  return groups;
}

}  // namespace advlab::rollout
