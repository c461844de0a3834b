#pragma once

#include "advlab/learn/losses.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace advlab::learn {

/// The fourteen training recipes, in registry order.
enum class MethodId {
  Bc,
  Dagger,
  BcTf1,
  Ppo,
  BcThenPpo,
  DaggerThenPpo,
  BcTf1ThenPpo,
  BcPlusPpo,
  BcDemo,
  BcDemoPlusPpo,
  Adv,
  DaggerThenAdv,
  BcTf1ThenAdv,
  AdvDemoPlusPpo,
};

struct MethodInfo {
  MethodId id;
  std::string_view key;      // ascii id used on the command line and in files
  std::string_view display;  // table name
  bool searches_split;
  bool searches_alpha;
  bool uses_demos;
  bool uses_expert;  // needs expert labels at some point
};

const std::array<MethodInfo, 14>& method_registry();
const MethodInfo& method_info(MethodId id);
/// Accepts ascii keys or display names, case-insensitively ("->" may stand in for the arrow).
MethodId parse_method(std::string_view name);
std::string valid_method_list();

struct MethodConfig {
  MethodId method = MethodId::Ppo;
  double lr = 1e-3;
  std::optional<double> stage_split;
  std::optional<double> alpha;
  double beta = std::numeric_limits<double>::infinity();
  double static_mix_weight = 0.5;

  /// Throws if a searched field is missing or an unused one is set.
  void validate() const;
  AdvisorParams advisor() const { return {alpha.value_or(0.0), beta}; }
};

/// What to optimise at a point of the schedule.
struct StagePlan {
  std::string_view name;
  bool rollouts = true;
  double teacher_forcing = 0.0;
  bool expert_labels = false;
  LossConfig rollout_loss;
  /// Extra imitation step on a demonstration minibatch after each rollout
  /// minibatch (or alone when rollouts is false).
  bool demo_step = false;
  LossConfig demo_loss;
};

/// Stage at step t of a T-step budget. X->Y methods switch at split*T; the
/// DAgger stage anneals teacher forcing linearly from 1 to 0 over [0, split*T).
StagePlan stage_plan(const MethodConfig& config, std::int64_t t, std::int64_t total, double clip_eps);

/// Linearly decayed PPO clip: 0.1 * (1 - t/T).
double clip_schedule(std::int64_t t, std::int64_t total, double initial = 0.1);

}  // namespace advlab::learn
