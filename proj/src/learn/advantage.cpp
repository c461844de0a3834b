#include "advlab/learn/advantage.hpp"

#include <stdexcept>

namespace advlab::learn {

AdvantageResult gae_advantages(const std::vector<double>& rewards, const std::vector<double>& values,
                               const std::vector<bool>& dones, double bootstrap, double gamma, double lambda) {
  const std::size_t n = rewards.size();
  if (values.size() != n || dones.size() != n) throw std::invalid_argument("gae_advantages: length mismatch");
  AdvantageResult r;
  r.advantages.assign(n, 0.0);
  r.returns.assign(n, 0.0);
  double next_value = bootstrap;
  double running = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    const double live = dones[i] ? 0.0 : 1.0;
    const double delta = rewards[i] + gamma * next_value * live - values[i];
    running = delta + gamma * lambda * live * running;
    r.advantages[i] = running;
    r.returns[i] = running + values[i];
    next_value = values[i];
  }
  return r;
}

}  // namespace advlab::learn
