#pragma once

// Gradient and head-isolation checks shared by the unit and acceptance tests.

#include "advlab/diff/random.hpp"
#include "advlab/experts/experts.hpp"
#include "advlab/learn/losses.hpp"
#include "advlab/learn/policy.hpp"
#include "advlab/rollout/rollout.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace advlab::checks {

/// A real minibatch: rollouts with some teacher forcing, expert labels, GAE,
/// normalised advantages, and old log-probs jittered so ratios differ from 1
/// while staying inside the clip range.
inline rollout::Minibatch random_minibatch(const envs::TaskSpec& spec, const learn::PolicyNet& policy,
                                           learn::Index lanes, learn::Index steps, std::uint64_t seed) {
  rollout::Collector collector(spec, 17, seed, lanes, steps);
  const auto expert = experts::make_expert(spec);
  auto buf = collector.collect(policy, 0.3, expert.get(), true);
  rollout::compute_advantages(buf);
  std::vector<learn::Index> all(static_cast<std::size_t>(lanes));
  for (learn::Index b = 0; b < lanes; ++b) all[static_cast<std::size_t>(b)] = b;
  auto mb = rollout::make_minibatch(buf, all);
  learn::normalize_advantages(mb.targets.advantages);
  Rng rng(seed, 0x9C);
  for (auto& lp : mb.targets.old_log_probs) lp += rng.uniform(-0.04, 0.04);
  return mb;
}

enum class LossKind { Bc, Ppo, Advisor };

/// The full training loss of each kind. Advisor weights are frozen at the
/// current parameters so the loss is smooth for finite differences.
inline learn::LossConfig loss_config(LossKind kind, const learn::PolicyNet& policy, const rollout::Minibatch& mb) {
  learn::LossConfig c;
  c.clip_eps = 0.1;
  switch (kind) {
    case LossKind::Bc:
      c.main = learn::MainTerm::Imitation;
      c.value_term = false;
      break;
    case LossKind::Ppo:
      c.main = learn::MainTerm::Ppo;
      break;
    case LossKind::Advisor: {
      c.main = learn::MainTerm::Advisor;
      c.advisor = {5.0, std::numeric_limits<double>::infinity()};
      c.aux_term = true;
      const auto out = policy.forward(mb.input, false);
      c.frozen_weights = learn::compute_loss(out.main_probs, out.aux_probs, out.values, mb.targets, c).weights;
      break;
    }
  }
  return c;
}

inline double loss_value(const learn::PolicyNet& policy, const rollout::Minibatch& mb, const learn::LossConfig& c) {
  const auto out = policy.forward(mb.input, false);
  return learn::compute_loss(out.main_probs, out.aux_probs, out.values, mb.targets, c).total;
}

struct GradCheck {
  double max_rel_error = 0.0;
  std::string worst;
  int checked = 0;
};

/// Central differences on up to `per_tensor` random entries of every tensor.
/// Relative error is |a - n| / max(|a|, |n|, floor).
inline GradCheck gradient_check(learn::PolicyNet& policy, const rollout::Minibatch& mb, const learn::LossConfig& c,
                                int per_tensor, std::uint64_t seed, double h = 1e-6, double floor = 1e-5) {
  policy.params().zero_grad();
  const auto out = policy.forward(mb.input, true);
  const auto r = learn::compute_loss(out.main_probs, out.aux_probs, out.values, mb.targets, c);
  policy.backward(mb.input, out, r.d_main_logits, r.d_aux_logits, r.d_values);

  GradCheck result;
  Rng rng(seed, 0x6C);
  for (auto& [name, tensor] : policy.params()) {
    const learn::Index n = tensor.size();
    const int count = static_cast<int>(std::min<learn::Index>(n, per_tensor));
    for (int k = 0; k < count; ++k) {
      const learn::Index i = count == n ? k : rng.integer(0, n);
      double& x = tensor.value.data()[i];
      const double saved = x;
      x = saved + h;
      const double up = loss_value(policy, mb, c);
      x = saved - h;
      const double down = loss_value(policy, mb, c);
      x = saved;
      const double numeric = (up - down) / (2 * h);
      const double analytic = tensor.grad.data()[i];
      const double err = std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), floor});
      ++result.checked;
      if (err > result.max_rel_error) {
        result.max_rel_error = err;
        result.worst = name + "[" + std::to_string(i) + "]";
      }
    }
  }
  return result;
}

inline bool grads_all_zero(const learn::PolicyNet& policy, const std::string& prefix) {
  bool any = false;
  for (const auto& [name, tensor] : policy.params()) {
    if (name.rfind(prefix, 0) != 0) continue;
    any = true;
    if ((tensor.grad.array() != 0.0).any()) return false;
  }
  return any;
}

inline bool grads_any_nonzero(const learn::PolicyNet& policy, const std::string& prefix) {
  for (const auto& [name, tensor] : policy.params()) {
    if (name.rfind(prefix, 0) == 0 && (tensor.grad.array() != 0.0).any()) return true;
  }
  return false;
}

struct Isolation {
  bool ppo_leaves_aux = false;   // d(PPO)/d(aux head) == 0 exactly
  bool ppo_reaches_main = false;
  bool aux_leaves_main = false;  // d(aux CE)/d(main head) == 0 exactly
  bool aux_reaches_aux = false;
};

inline Isolation aux_isolation(learn::PolicyNet& policy, const rollout::Minibatch& mb) {
  Isolation iso;
  const auto out = policy.forward(mb.input, true);

  learn::LossConfig ppo;
  ppo.main = learn::MainTerm::Ppo;
  ppo.value_term = false;
  policy.params().zero_grad();
  auto r = learn::compute_loss(out.main_probs, out.aux_probs, out.values, mb.targets, ppo);
  policy.backward(mb.input, out, r.d_main_logits, r.d_aux_logits, r.d_values);
  iso.ppo_leaves_aux = grads_all_zero(policy, "aux.");
  iso.ppo_reaches_main = grads_any_nonzero(policy, "main.");

  learn::LossConfig aux;
  aux.main = learn::MainTerm::Ppo;
  aux.ppo_term = false;
  aux.value_term = false;
  aux.aux_term = true;
  policy.params().zero_grad();
  r = learn::compute_loss(out.main_probs, out.aux_probs, out.values, mb.targets, aux);
  policy.backward(mb.input, out, r.d_main_logits, r.d_aux_logits, r.d_values);
  iso.aux_leaves_main = grads_all_zero(policy, "main.");
  iso.aux_reaches_aux = grads_any_nonzero(policy, "aux.");
  return iso;
}

}  // namespace advlab::checks
