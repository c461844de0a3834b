#include "advlab/harness/evaluation.hpp"

#include "advlab/envs/env.hpp"

#include <stdexcept>

namespace advlab::harness {

EvalMetrics evaluate_policy(const learn::PolicyNet& policy, const envs::TaskSpec& task, int n_episodes,
                            std::uint64_t experiment_seed, std::uint64_t first_seed) {
  if (n_episodes <= 0) throw std::invalid_argument("evaluate_policy: n_episodes must be positive");
  using learn::Index;
  std::vector<std::unique_ptr<envs::Env>> envs;
  std::vector<double> returns(static_cast<std::size_t>(n_episodes), 0.0);
  for (int e = 0; e < n_episodes; ++e) {
    envs.push_back(envs::make_env(task, experiment_seed));
    envs.back()->reset(first_seed + static_cast<std::uint64_t>(e));
  }
  learn::Matrix h = policy.initial_state(n_episodes);
  learn::Matrix c = policy.initial_state(n_episodes);
  std::vector<Index> active(static_cast<std::size_t>(n_episodes));
  for (int e = 0; e < n_episodes; ++e) active[static_cast<std::size_t>(e)] = e;

  learn::NetInput in;
  in.steps = 1;
  while (!active.empty()) {
    const auto L = static_cast<Index>(active.size());
    in.lanes = L;
    in.observations.clear();
    in.resets.assign(static_cast<std::size_t>(L), 0);
    in.h0.resize(h.rows(), L);
    in.c0.resize(c.rows(), L);
    for (Index j = 0; j < L; ++j) {
      const Index e = active[static_cast<std::size_t>(j)];
      in.observations.push_back(envs[static_cast<std::size_t>(e)]->observe());
      if (h.rows() > 0) {
        in.h0.col(j) = h.col(e);
        in.c0.col(j) = c.col(e);
      }
    }
    const learn::NetOutput out = policy.forward(in, false);
    std::vector<Index> still;
    for (Index j = 0; j < L; ++j) {
      const Index e = active[static_cast<std::size_t>(j)];
      if (h.rows() > 0) {
        h.col(e) = out.h.col(j);
        c.col(e) = out.c.col(j);
      }
      auto& env = *envs[static_cast<std::size_t>(e)];
      returns[static_cast<std::size_t>(e)] += env.step(learn::greedy_action(out.main_probs, j)).reward;
      if (!env.done()) still.push_back(e);
    }
    active = std::move(still);
  }

  EvalMetrics m;
  m.episodes = n_episodes;
  for (int e = 0; e < n_episodes; ++e) {
    const auto& env = *envs[static_cast<std::size_t>(e)];
    m.mean_reward += returns[static_cast<std::size_t>(e)];
    m.success_rate += env.succeeded() ? 1.0 : 0.0;
    m.mean_length += env.elapsed_steps();
  }
  m.mean_reward /= n_episodes;
  m.success_rate /= n_episodes;
  m.mean_length /= n_episodes;
  return m;
}

}  // namespace advlab::harness
