#pragma once

#include "advlab/envs/env.hpp"

#include <vector>

namespace advlab::envs {

/// N doors; door 1 needs an M-digit code over {0,1,2} and pays 1, one hidden
/// door among 2..N pays 2 and the rest pay -2. Door indices here are 0-based,
/// so "door 1" is action 0 and digits are actions N..N+2.
class PoisonedDoorsEnv final : public Env {
 public:
  enum class Phase { ChooseDoor = 0, DoorOneChosen = 1, EnteringCode = 2, Terminal = 3 };

  PoisonedDoorsEnv(TaskSpec spec, std::uint64_t experiment_seed);

  const TaskSpec& spec() const override { return spec_; }
  void reset(std::uint64_t episode_seed) override;
  StepResult step(int action) override;
  Observation observe() const override;
  bool done() const override { return phase_ == Phase::Terminal; }
  bool succeeded() const override { return done() && last_reward_ > 0.0; }
  int elapsed_steps() const override { return steps_; }
  ActionMask legal_actions() const override;
  std::string state_bytes() const override;
  std::unique_ptr<Env> clone() const override { return std::make_unique<PoisonedDoorsEnv>(*this); }

  Phase phase() const { return phase_; }
  int good_door() const { return good_door_; }
  const std::vector<int>& code() const { return code_; }
  int digits_entered() const { return static_cast<int>(entered_.size()); }

  int door_action(int door) const { return door; }
  int digit_action(int digit) const { return spec_.doors + digit; }

 private:
  TaskSpec spec_;
  std::vector<int> code_;
  Phase phase_ = Phase::Terminal;
  int good_door_ = 1;
  std::vector<int> entered_;
  int steps_ = 0;
  double last_reward_ = 0.0;
};

}  // namespace advlab::envs
