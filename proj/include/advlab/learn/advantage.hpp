#pragma once

#include <vector>

namespace advlab::learn {

struct AdvantageResult {
  std::vector<double> advantages;
  std::vector<double> returns;  // advantages + values
};

/// Generalised advantage estimation over one lane's segment. dones[t] marks
/// that the episode ended with step t; `bootstrap` is the value of the state
/// following the last step (ignored if that step was terminal).
AdvantageResult gae_advantages(const std::vector<double>& rewards, const std::vector<double>& values,
                               const std::vector<bool>& dones, double bootstrap, double gamma = 0.99,
                               double lambda = 1.0);

}  // namespace advlab::learn
