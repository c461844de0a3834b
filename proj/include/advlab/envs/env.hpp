#pragma once

#include "advlab/envs/observation.hpp"
#include "advlab/envs/task.hpp"

#include <cstdint>
#include <memory>
#include <string>

namespace advlab::envs {

struct StepResult {
  double reward = 0.0;
  bool done = false;
};

/// A value-like episodic state machine. Terminal states reject further steps.
class Env {
 public:
  virtual ~Env() = default;

  virtual const TaskSpec& spec() const = 0;
  virtual void reset(std::uint64_t episode_seed) = 0;
  virtual StepResult step(int action) = 0;
  virtual Observation observe() const = 0;
  virtual bool done() const = 0;
  /// True once the episode ended in the task's success condition.
  virtual bool succeeded() const = 0;
  virtual int elapsed_steps() const = 0;
  virtual ActionMask legal_actions() const { return (ActionMask{1} << num_actions()) - 1; }
  /// Serialized full state, for determinism checks.
  virtual std::string state_bytes() const = 0;
  virtual std::unique_ptr<Env> clone() const = 0;

  int num_actions() const { return spec().num_actions(); }
};

/// experiment_seed fixes per-experiment hidden quantities (the PoisonedDoors code).
std::unique_ptr<Env> make_env(const TaskSpec& spec, std::uint64_t experiment_seed);

}  // namespace advlab::envs
