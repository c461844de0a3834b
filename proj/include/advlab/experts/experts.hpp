#pragma once

#include "advlab/diff/param_store.hpp"
#include "advlab/diff/random.hpp"
#include "advlab/envs/env.hpp"

#include <memory>
#include <string>

namespace advlab::experts {

using diff::Vector;
using envs::Env;

/// A privileged policy: reads the full environment state and returns a
/// distribution over the task's actions. Implementations are stateless.
class Expert {
 public:
  virtual ~Expert() = default;
  virtual Vector distribution(const Env& env) const = 0;
  virtual std::string kind() const = 0;
};

/// First action of a shortest (cell, heading) path to the goal. Ignores
/// lighting and never proposes the switch action.
class ShortestPathExpert final : public Expert {
 public:
  Vector distribution(const Env& env) const override;
  std::string kind() const override { return "shortest_path"; }
};

/// The f^j-optimal lighthouse policy. A privilege of at least 2N sees the
/// whole grid from the start.
class LighthouseExpert final : public Expert {
 public:
  explicit LighthouseExpert(int privilege) : privilege_(privilege) {}
  Vector distribution(const Env& env) const override;
  std::string kind() const override { return "lighthouse_j" + std::to_string(privilege_); }
  int privilege() const { return privilege_; }

 private:
  int privilege_;
};

/// Opens the good door; if the episode is already in the code path it types
/// the next correct digit.
class PoisonedDoorsExpert final : public Expert {
 public:
  Vector distribution(const Env& env) const override;
  std::string kind() const override { return "pd"; }
};

/// Uniform over all actions within `radius` actions of the goal, otherwise
/// the wrapped expert unchanged.
class CorruptExpert final : public Expert {
 public:
  CorruptExpert(std::shared_ptr<const Expert> inner, int radius) : inner_(std::move(inner)), radius_(radius) {}
  Vector distribution(const Env& env) const override;
  std::string kind() const override { return "corrupt" + std::to_string(radius_) + "_" + inner_->kind(); }

 private:
  std::shared_ptr<const Expert> inner_;
  int radius_;
};

/// The task's expert: shortest path (corrupted for Corrupt variants),
/// lighthouse with the task's expert_radius, or the doors expert.
std::shared_ptr<const Expert> make_expert(const envs::TaskSpec& spec);

/// Draws an action id from an expert distribution.
int sample_action(const Vector& dist, Rng& rng);

/// One-hot vector of length n.
Vector one_hot(int n, int index);

}  // namespace advlab::experts
