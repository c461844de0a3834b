#pragma once

#include "advlab/envs/env.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace advlab::envs {

/// The lighthouse gridworld in one or two dimensions. The agent starts at the
/// origin of [-N, N]^D and the goal sits at one of the 2^D corners.
///
/// 1D actions: 0 = left, 1 = right. 2D actions: 0 = up, 1 = down, 2 = left, 3 = right.
/// Rewards: 0.99 on reaching the goal, -1 when the step limit is hit, -0.01 otherwise.
class LighthouseEnv final : public Env {
 public:
  using Point = std::array<int, 2>;

  explicit LighthouseEnv(TaskSpec spec);

  const TaskSpec& spec() const override { return spec_; }
  void reset(std::uint64_t episode_seed) override;
  StepResult step(int action) override;
  Observation observe() const override;
  bool done() const override { return done_; }
  bool succeeded() const override { return done_ && position_ == goal_; }
  int elapsed_steps() const override { return steps_; }
  std::string state_bytes() const override;
  std::unique_ptr<Env> clone() const override { return std::make_unique<LighthouseEnv>(*this); }

  /// Places the goal directly; corner index bit d set means +N along axis d.
  void reset_with_goal(int corner);

  int dims() const { return dims_; }
  int half_width() const { return spec_.grid_size; }
  int num_corners() const { return 1 << dims_; }
  const Point& position() const { return position_; }
  const Point& goal() const { return goal_; }
  int goal_corner() const { return corner_index(goal_); }
  Point corner(int index) const;
  int corner_index(const Point& p) const;
  /// Smallest Chebyshev distance between the agent and corner c over the trajectory so far.
  int closest_approach(int c) const { return closest_[static_cast<std::size_t>(c)]; }
  const std::vector<Point>& trajectory() const { return trajectory_; }
  const std::vector<int>& actions() const { return actions_; }

  /// Observation under view radius `radius` (the task's view_radius for observe()).
  Observation observe_with_radius(int radius) const;

  /// Displacement of an action along each axis.
  Point action_delta(int action) const;

 private:
  int chebyshev(const Point& a, const Point& b) const;
  void update_closest();

  TaskSpec spec_;
  int dims_;
  Point position_{0, 0};
  Point goal_{0, 0};
  int steps_ = 0;
  bool done_ = true;
  std::array<int, 4> closest_{};
  std::vector<Point> trajectory_;
  std::vector<int> actions_;
};

/// Size of the 2D one-hot encoding: 4^4 corner statuses x 5^2 previous actions.
inline constexpr int kLighthouse2DEncodingSize = 6400;

/// Expands a 2D lighthouse observation into its {0,1} vector.
std::vector<std::uint8_t> lighthouse2d_binary(const Observation& obs);

/// Expected f^i-optimal episode length on the 1D task, averaged over both goals.
double lighthouse1d_optimal_length(int half_width, int view_radius);

}  // namespace advlab::envs
