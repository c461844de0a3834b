#include "advlab/rollout/demo_sampler.hpp"

#include <algorithm>
#include <stdexcept>

namespace advlab::rollout {

DemoSampler::DemoSampler(const experts::Demonstration& demo, Index num_actions, std::uint64_t seed)
    : num_actions_(num_actions), rng_(seed, 0xDE3A) {
  for (const auto& episode : demo.episodes) {
    for (std::size_t i = 0; i < episode.size(); ++i) {
      steps_.push_back(&episode[i]);
      starts_.push_back(i == 0 ? 1 : 0);
    }
  }
  if (steps_.empty()) throw std::invalid_argument("DemoSampler: empty demonstration set");
}

Minibatch DemoSampler::sample(Index windows, Index length) {
  if (windows < 1 || length < 1) throw std::invalid_argument("DemoSampler: empty request");
  const Index total = static_cast<Index>(steps_.size());
  const Index T = std::min(length, total);
  Minibatch mb;
  mb.input.steps = T;
  mb.input.lanes = windows;
  mb.input.observations.resize(static_cast<std::size_t>(T * windows));
  mb.input.resets.resize(static_cast<std::size_t>(T * windows));
  auto& tg = mb.targets;
  tg.actions.resize(static_cast<std::size_t>(T * windows));
  tg.expert = Matrix::Zero(num_actions_, T * windows);
  for (Index w = 0; w < windows; ++w) {
    const Index start = rng_.integer(0, total - T + 1);
    for (Index t = 0; t < T; ++t) {
      const auto& step = *steps_[static_cast<std::size_t>(start + t)];
      const auto col = static_cast<std::size_t>(t * windows + w);
      mb.input.observations[col] = step.observation;
      mb.input.resets[col] = (t == 0 || starts_[static_cast<std::size_t>(start + t)]) ? 1 : 0;
      tg.actions[col] = step.executed_action;
      tg.expert(step.expert_action, static_cast<Index>(col)) = 1.0;
    }
  }
  return mb;
}

}  // namespace advlab::rollout
