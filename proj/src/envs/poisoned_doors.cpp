#include "advlab/envs/poisoned_doors.hpp"

#include "advlab/diff/random.hpp"

#include <stdexcept>

namespace advlab::envs {

PoisonedDoorsEnv::PoisonedDoorsEnv(TaskSpec spec, std::uint64_t experiment_seed) : spec_(std::move(spec)) {
  if (spec_.family != Family::PoisonedDoors) throw std::invalid_argument("PoisonedDoorsEnv: wrong family");
  Rng rng(experiment_seed, 0xC0DE);
  code_.resize(static_cast<std::size_t>(spec_.code_length));
  for (int& d : code_) d = static_cast<int>(rng.integer(0, 3));
}

void PoisonedDoorsEnv::reset(std::uint64_t episode_seed) {
  Rng rng(episode_seed, 0xD00A);
  good_door_ = static_cast<int>(rng.integer(1, spec_.doors));
  phase_ = Phase::ChooseDoor;
  entered_.clear();
  steps_ = 0;
  last_reward_ = 0.0;
}

ActionMask PoisonedDoorsEnv::legal_actions() const {
  const ActionMask doors = (ActionMask{1} << spec_.doors) - 1;
  switch (phase_) {
    case Phase::ChooseDoor:
      return doors;
    case Phase::DoorOneChosen:
    case Phase::EnteringCode:
      return ActionMask{7} << spec_.doors;
    case Phase::Terminal:
      break;
  }
  return 0;
}

StepResult PoisonedDoorsEnv::step(int action) {
  if (phase_ == Phase::Terminal) throw std::logic_error("PoisonedDoorsEnv: step after episode end");
  if (action < 0 || action >= num_actions() || !(legal_actions() >> action & 1U)) {
    throw std::logic_error("PoisonedDoorsEnv: illegal action for current phase");
  }
  ++steps_;
  StepResult r;
  if (phase_ == Phase::ChooseDoor) {
    if (action == 0) {
      phase_ = Phase::DoorOneChosen;
    } else {
      r.reward = action == good_door_ ? 2.0 : -2.0;
      r.done = true;
      phase_ = Phase::Terminal;
    }
  } else {
    entered_.push_back(action - spec_.doors);
    phase_ = Phase::EnteringCode;
    if (static_cast<int>(entered_.size()) == spec_.code_length) {
      r.reward = entered_ == code_ ? 1.0 : 0.0;
      r.done = true;
      phase_ = Phase::Terminal;
    }
  }
  last_reward_ = r.reward;
  return r;
}

Observation PoisonedDoorsEnv::observe() const {
  Observation o;
  o.encoding = Encoding::PdCategorical;
  o.tokens = {static_cast<std::int32_t>(phase_)};
  o.legal = legal_actions();
  return o;
}

std::string PoisonedDoorsEnv::state_bytes() const {
  std::string s;
  s.push_back(static_cast<char>(phase_));
  s.push_back(static_cast<char>(good_door_));
  for (int d : code_) s.push_back(static_cast<char>('0' + d));
  s.push_back('|');
  for (int d : entered_) s.push_back(static_cast<char>('0' + d));
  s.push_back(static_cast<char>(steps_));
  return s;
}

}  // namespace advlab::envs
