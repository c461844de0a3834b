#pragma once

#include "advlab/envs/env.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace advlab::envs {

enum class Cell : std::uint8_t { Empty = 0, Wall = 1, Lava = 2, Goal = 3 };

/// S x S grid with a wall border; (x, y) with y growing downwards.
struct CrossingGrid {
  int size = 0;
  std::vector<Cell> cells;

  Cell at(int x, int y) const { return cells[static_cast<std::size_t>(y * size + x)]; }
  Cell& at(int x, int y) { return cells[static_cast<std::size_t>(y * size + x)]; }
  bool inside(int x, int y) const { return x >= 0 && y >= 0 && x < size && y < size; }

  friend bool operator==(const CrossingGrid&, const CrossingGrid&) = default;
};

/// Rivers of `obstacle` run across the full width or height at even rows and
/// columns; each is pierced by exactly one gap placed along a random monotone
/// route from the top-left room to the bottom-right room. Throws if no
/// reachable layout is found within a bounded number of attempts.
CrossingGrid crossing_generate(int size, int num_obstacles, Cell obstacle, std::uint64_t seed);

/// Cell-level reachability from (1,1) to the goal avoiding walls and lava.
bool crossing_reachable(const CrossingGrid& grid);

// Headings: 0 = east, 1 = south, 2 = west, 3 = north.
inline constexpr int kDx[4] = {1, 0, -1, 0};
inline constexpr int kDy[4] = {0, 1, 0, -1};

// Action ids.
inline constexpr int kTurnLeft = 0;
inline constexpr int kTurnRight = 1;
inline constexpr int kForward = 2;
inline constexpr int kSwitch = 3;

// Observation vocabularies (each table has 8 slots).
inline constexpr std::int32_t kTypeUnseen = 0, kTypeEmpty = 1, kTypeWall = 2, kTypeGoal = 3, kTypeLava = 4,
                              kTypeDark = 5;
inline constexpr std::int32_t kColorNone = 0, kColorGrey = 1, kColorGreen = 2, kColorRed = 3, kColorDark = 4;
inline constexpr std::int32_t kStateNone = 0, kStateDark = 1;
inline constexpr int kViewSize = 7;

/// Minimum number of actions (turns count) from every (cell, heading) to the
/// goal, -1 where the goal is unreachable. Indexed ((y * size) + x) * 4 + heading.
std::vector<int> heading_distances(const CrossingGrid& grid);

/// WallCrossing / LavaCrossing with the Switch and Corrupt variants.
class CrossingEnv final : public Env {
 public:
  explicit CrossingEnv(TaskSpec spec);

  const TaskSpec& spec() const override { return spec_; }
  /// Generates the maze for this seed and places the agent at (1,1) facing east.
  void reset(std::uint64_t episode_seed) override;
  StepResult step(int action) override;
  Observation observe() const override;
  bool done() const override { return done_; }
  bool succeeded() const override { return success_; }
  int elapsed_steps() const override { return steps_; }
  std::string state_bytes() const override;
  std::unique_ptr<Env> clone() const override { return std::make_unique<CrossingEnv>(*this); }

  /// The unaffected egocentric view, regardless of lighting.
  Observation observe_lit() const;
  bool lights_on() const;
  bool died() const { return died_; }

  const CrossingGrid& grid() const { return *grid_; }
  int x() const { return x_; }
  int y() const { return y_; }
  int heading() const { return heading_; }
  /// Actions needed to reach the goal from the current (cell, heading).
  int distance_to_goal() const;
  int distance_to_goal(int x, int y, int heading) const;

  /// Test hook: moves the agent without stepping.
  void place_agent(int x, int y, int heading);
  /// Test hook: replaces the maze (distances are recomputed).
  void set_grid(CrossingGrid grid);

 private:
  TaskSpec spec_;
  std::shared_ptr<const CrossingGrid> grid_;
  std::shared_ptr<const std::vector<int>> distances_;
  int x_ = 1;
  int y_ = 1;
  int heading_ = 0;
  int steps_ = 0;
  bool done_ = true;
  bool success_ = false;
  bool died_ = false;
  bool switched_on_ = false;   // Once: permanent
  bool flash_ = false;         // Faulty: lit for the observation after a switch
};

/// Replaces every cell of a crossing observation with the dark sentinel.
Observation apply_darkness(const Observation& obs, bool lights_on);

}  // namespace advlab::envs
