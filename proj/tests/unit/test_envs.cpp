#include "advlab/envs/crossing.hpp"
#include "advlab/envs/lighthouse.hpp"
#include "advlab/envs/poisoned_doors.hpp"
#include "advlab/envs/task.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <set>

using namespace advlab::envs;

namespace {

TaskSpec crossing_task(Family f, int size, int n, Variant v = Variant::Base, int nc = 0) {
  TaskSpec t;
  t.id = "test";
  t.family = f;
  t.grid_size = size;
  t.num_obstacles = n;
  t.variant = v;
  t.corrupt_distance = nc;
  t.validate();
  return t;
}

TaskSpec lighthouse_task(int dims, int n, int i) {
  TaskSpec t;
  t.id = "lh";
  t.family = dims == 1 ? Family::Lighthouse1D : Family::Lighthouse2D;
  t.grid_size = n;
  t.view_radius = i;
  t.validate();
  return t;
}

}  // namespace

// ---- PoisonedDoors

TEST(PoisonedDoors, GoodDoorPaysTwo) {
  PoisonedDoorsEnv env(find_task("pd"), 7);
  env.reset(3);
  EXPECT_EQ(env.phase(), PoisonedDoorsEnv::Phase::ChooseDoor);
  EXPECT_EQ(env.legal_actions(), 0b1111u);
  const auto r = env.step(env.door_action(env.good_door()));
  EXPECT_EQ(r.reward, 2.0);
  EXPECT_TRUE(r.done);
  EXPECT_TRUE(env.succeeded());
  EXPECT_THROW(env.step(0), std::logic_error);
}

TEST(PoisonedDoors, BadDoorCostsTwo) {
  PoisonedDoorsEnv env(find_task("pd"), 7);
  env.reset(3);
  const int bad = env.good_door() == 1 ? 2 : 1;
  const auto r = env.step(env.door_action(bad));
  EXPECT_EQ(r.reward, -2.0);
  EXPECT_FALSE(env.succeeded());
}

TEST(PoisonedDoors, CodePath) {
  const TaskSpec spec = find_task("pd");
  PoisonedDoorsEnv env(spec, 11);
  env.reset(0);
  EXPECT_EQ(env.step(0).reward, 0.0);
  EXPECT_EQ(env.observe().tokens[0], 1);
  EXPECT_THROW(env.step(1), std::logic_error);  // doors are closed now
  for (int k = 0; k < spec.code_length; ++k) {
    const auto r = env.step(env.digit_action(env.code()[static_cast<std::size_t>(k)]));
    EXPECT_EQ(r.done, k + 1 == spec.code_length);
    if (r.done) {
      EXPECT_EQ(r.reward, 1.0);
    }
  }
  EXPECT_EQ(env.elapsed_steps(), 1 + spec.code_length);

  env.reset(0);
  env.step(0);
  double total = 0;
  for (int k = 0; k < spec.code_length; ++k) {
    const int wrong = (env.code()[static_cast<std::size_t>(k)] + 1) % 3;
    total += env.step(env.digit_action(wrong)).reward;
  }
  EXPECT_EQ(total, 0.0);
  EXPECT_TRUE(env.done());
}

TEST(PoisonedDoors, CodeFixedPerExperimentGoodDoorPerEpisode) {
  const TaskSpec spec = find_task("pd");
  PoisonedDoorsEnv a(spec, 5), b(spec, 5), c(spec, 6);
  EXPECT_EQ(a.code(), b.code());
  EXPECT_NE(a.code(), c.code());
  std::set<int> doors;
  for (std::uint64_t s = 0; s < 200; ++s) {
    a.reset(s);
    doors.insert(a.good_door());
  }
  EXPECT_EQ(doors, (std::set<int>{1, 2, 3}));
}

// ---- Lighthouse

TEST(Lighthouse, MovesClipAndRewards) {
  LighthouseEnv env(lighthouse_task(1, 3, 1));
  env.reset_with_goal(1);
  EXPECT_EQ(env.step(0).reward, -0.01);
  env.step(0);
  env.step(0);
  env.step(0);  // clipped at -3
  EXPECT_EQ(env.position()[0], -3);
  for (int k = 0; k < 5; ++k) env.step(1);
  const auto r = env.step(1);
  EXPECT_EQ(env.position()[0], 3);
  EXPECT_EQ(r.reward, 0.99);
  EXPECT_TRUE(r.done);
  EXPECT_TRUE(env.succeeded());
}

TEST(Lighthouse, StepLimitPenalty) {
  TaskSpec spec = lighthouse_task(2, 4, 1);
  spec.max_episode_steps = 3;
  LighthouseEnv env(spec);
  env.reset_with_goal(3);
  env.step(2);
  env.step(3);
  const auto r = env.step(2);
  EXPECT_EQ(r.reward, -1.0);
  EXPECT_TRUE(r.done);
  EXPECT_FALSE(env.succeeded());
}

TEST(Lighthouse, ClosestApproachTracksChebyshevDistance) {
  LighthouseEnv env(lighthouse_task(2, 4, 1));
  env.reset_with_goal(0);
  EXPECT_EQ(env.closest_approach(3), 4);
  env.step(3);
  env.step(0);
  env.step(0);  // (1, 2)
  EXPECT_EQ(env.closest_approach(3), 3);
  env.step(1);
  env.step(1);
  EXPECT_EQ(env.closest_approach(3), 3);
  EXPECT_EQ(env.closest_approach(0), 4);  // from the origin
}

TEST(Lighthouse, TwoDimensionalEncodingIsOneHot) {
  LighthouseEnv env(lighthouse_task(2, 2, 1));
  std::set<int> seen;
  for (int goal = 0; goal < 4; ++goal) {
    env.reset_with_goal(goal);
    EXPECT_EQ(env.observe().tokens[0], 0);  // nothing seen, no previous actions
    for (int a : {3, 3, 0, 1, 2}) {
      if (env.done()) break;
      env.step(a);
      const auto o = env.observe();
      ASSERT_EQ(o.tokens.size(), 1u);
      ASSERT_GE(o.tokens[0], 0);
      ASSERT_LT(o.tokens[0], kLighthouse2DEncodingSize);
      const auto bits = lighthouse2d_binary(o);
      EXPECT_EQ(std::count(bits.begin(), bits.end(), 1), 1);
      seen.insert(o.tokens[0]);
    }
  }
  EXPECT_GT(seen.size(), 5u);
}

TEST(Lighthouse, OneDimensionalViewMarksCorners) {
  LighthouseEnv env(lighthouse_task(1, 2, 1));
  env.reset_with_goal(0);
  env.step(1);  // at +1, sees +2 (not the goal)
  const auto o = env.observe();
  // [length=2, view(0)=(0,0,0), view(+1)=(0,0,1), diff=+1]
  EXPECT_EQ(o.tokens, (std::vector<std::int32_t>{2, 0, 0, 0, 0, 0, 1, 1}));
  env.step(0);
  env.step(0);  // at -1, sees -2 (goal)
  EXPECT_EQ(env.observe().tokens[1 + 3 * 3 + 0], 2);
}

TEST(Lighthouse, OptimalLengthFormula) {
  EXPECT_DOUBLE_EQ(lighthouse1d_optimal_length(4, 1), 7.0);
  EXPECT_DOUBLE_EQ(lighthouse1d_optimal_length(4, 4), 4.0);
}

// ---- Crossing generation

TEST(CrossingGenerate, RiversHaveExactlyOneGapAndMazeIsSolvable) {
  for (int size : {9, 15, 25}) {
    const int n = size == 9 ? 4 : size == 15 ? 7 : 10;
    for (Cell kind : {Cell::Wall, Cell::Lava}) {
      for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const CrossingGrid g = crossing_generate(size, n, kind, seed);
        ASSERT_TRUE(crossing_reachable(g));
        EXPECT_EQ(g.at(size - 2, size - 2), Cell::Goal);
        EXPECT_EQ(g.at(1, 1), Cell::Empty);
        for (int i = 0; i < size; ++i) {
          EXPECT_EQ(g.at(i, 0), Cell::Wall);
          EXPECT_EQ(g.at(0, i), Cell::Wall);
          EXPECT_EQ(g.at(i, size - 1), Cell::Wall);
          EXPECT_EQ(g.at(size - 1, i), Cell::Wall);
        }
        // A full interior row/column of obstacles but one cell is a river.
        int rivers = 0;
        for (int k = 1; k < size - 1; ++k) {
          int row_obstacles = 0, col_obstacles = 0;
          for (int m = 1; m < size - 1; ++m) {
            row_obstacles += g.at(m, k) == kind;
            col_obstacles += g.at(k, m) == kind;
          }
          if (row_obstacles == size - 3) {
            ++rivers;
            EXPECT_EQ(k % 2, 0);
          }
          if (col_obstacles == size - 3) {
            ++rivers;
            EXPECT_EQ(k % 2, 0);
          }
          EXPECT_NE(row_obstacles, size - 2);  // never fully blocked
          EXPECT_NE(col_obstacles, size - 2);
        }
        EXPECT_EQ(rivers, n) << "size " << size << " seed " << seed;
      }
    }
  }
}

TEST(CrossingGenerate, Deterministic) {
  EXPECT_EQ(crossing_generate(15, 7, Cell::Lava, 3), crossing_generate(15, 7, Cell::Lava, 3));
  EXPECT_NE(crossing_generate(15, 7, Cell::Lava, 3), crossing_generate(15, 7, Cell::Lava, 4));
}

TEST(CrossingGenerate, RejectsImpossibleSizes) {
  EXPECT_THROW(crossing_generate(8, 2, Cell::Wall, 0), std::invalid_argument);
  EXPECT_THROW(crossing_generate(9, 7, Cell::Wall, 0), std::invalid_argument);
}

// ---- Crossing dynamics

TEST(Crossing, WallBumpLavaDeathGoalReward) {
  CrossingEnv env(crossing_task(Family::LavaCrossing, 7, 0));
  env.reset(0);
  CrossingGrid g = env.grid();
  g.at(2, 1) = Cell::Lava;
  env.set_grid(g);
  env.place_agent(1, 1, 3);  // facing the top wall
  env.step(kForward);
  EXPECT_EQ(env.x(), 1);
  EXPECT_EQ(env.y(), 1);
  EXPECT_EQ(env.elapsed_steps(), 1);
  env.step(kTurnRight);  // now east, lava ahead
  const auto r = env.step(kForward);
  EXPECT_TRUE(r.done);
  EXPECT_EQ(r.reward, 0.0);
  EXPECT_TRUE(env.died());
  EXPECT_FALSE(env.succeeded());

  env.reset(0);
  env.place_agent(5, 4, 1);  // goal (5,5) straight ahead
  const auto win = env.step(kForward);
  EXPECT_TRUE(win.done);
  EXPECT_TRUE(env.succeeded());
  EXPECT_DOUBLE_EQ(win.reward, 1.0 - 1.0 / env.spec().max_episode_steps);
}

TEST(Crossing, StepLimitEndsEpisode) {
  TaskSpec spec = crossing_task(Family::WallCrossing, 7, 0);
  spec.max_episode_steps = 4;
  CrossingEnv env(spec);
  env.reset(1);
  for (int k = 0; k < 3; ++k) EXPECT_FALSE(env.step(kTurnLeft).done);
  const auto r = env.step(kTurnLeft);
  EXPECT_TRUE(r.done);
  EXPECT_EQ(r.reward, 0.0);
}

TEST(Crossing, EgocentricViewMatchesWorldCells) {
  CrossingEnv env(crossing_task(Family::LavaCrossing, 15, 7));
  env.reset(2);
  const auto& g = env.grid();
  const int right_of[4] = {1, 2, 3, 0};
  for (int heading = 0; heading < 4; ++heading) {
    env.place_agent(5, 6, heading);
    const auto o = env.observe();
    ASSERT_EQ(o.tokens.size(), 147u);
    for (int vy = 0; vy < 7; ++vy) {
      for (int vx = 0; vx < 7; ++vx) {
        const int ahead = 6 - vy, lateral = vx - 3, r = right_of[heading];
        const int wx = 5 + ahead * kDx[heading] + lateral * kDx[r];
        const int wy = 6 + ahead * kDy[heading] + lateral * kDy[r];
        const int type = o.tokens[static_cast<std::size_t>((vy * 7 + vx) * 3)];
        if (!g.inside(wx, wy)) {
          EXPECT_EQ(type, kTypeUnseen);
          continue;
        }
        const int expect = g.at(wx, wy) == Cell::Wall   ? kTypeWall
                           : g.at(wx, wy) == Cell::Lava ? kTypeLava
                           : g.at(wx, wy) == Cell::Goal ? kTypeGoal
                                                        : kTypeEmpty;
        EXPECT_EQ(type, expect) << heading << " " << vx << "," << vy;
      }
    }
  }
}

TEST(Crossing, SwitchOnceStaysLit) {
  CrossingEnv env(crossing_task(Family::LavaCrossing, 9, 4, Variant::SwitchOnce));
  env.reset(5);
  EXPECT_EQ(env.num_actions(), 4);
  const auto dark = env.observe();
  for (std::size_t i = 0; i < dark.tokens.size(); i += 3) {
    EXPECT_EQ(dark.tokens[i], kTypeDark);
    EXPECT_EQ(dark.tokens[i + 1], kColorDark);
    EXPECT_EQ(dark.tokens[i + 2], kStateDark);
  }
  env.step(kSwitch);
  EXPECT_EQ(env.observe(), env.observe_lit());
  env.step(kTurnLeft);
  EXPECT_EQ(env.observe(), env.observe_lit());
}

TEST(Crossing, SwitchFaultyLightsOneObservation) {
  CrossingEnv env(crossing_task(Family::WallCrossing, 9, 4, Variant::SwitchFaulty));
  env.reset(5);
  EXPECT_FALSE(env.lights_on());
  env.step(kSwitch);
  EXPECT_TRUE(env.lights_on());
  EXPECT_EQ(env.observe(), env.observe_lit());
  env.step(kTurnLeft);
  EXPECT_FALSE(env.lights_on());
  EXPECT_NE(env.observe(), env.observe_lit());
}

TEST(Crossing, BaseVariantHasNoSwitch) {
  CrossingEnv env(crossing_task(Family::WallCrossing, 9, 4));
  env.reset(0);
  EXPECT_EQ(env.num_actions(), 3);
  EXPECT_THROW(env.step(kSwitch), std::logic_error);
  EXPECT_TRUE(env.lights_on());
}

TEST(Crossing, CloneIsIndependent) {
  CrossingEnv env(crossing_task(Family::WallCrossing, 9, 4));
  env.reset(3);
  auto copy = env.clone();
  env.step(kTurnRight);
  EXPECT_NE(env.state_bytes(), copy->state_bytes());
  copy->step(kTurnRight);
  EXPECT_EQ(env.state_bytes(), copy->state_bytes());
}

// ---- Catalog

TEST(TaskCatalog, BuiltinsAndRoundTrip) {
  const auto tasks = builtin_tasks();
  EXPECT_EQ(tasks.size(), 10u);
  for (const auto& t : tasks) EXPECT_EQ(task_from_json(task_to_json(t)).id, t.id);
  const TaskSpec wc = find_task("wc_corrupt");
  EXPECT_EQ(wc.corrupt_distance, 15);
  EXPECT_EQ(wc.max_episode_steps, 4 * 25 * 25);

  const auto path = std::filesystem::temp_directory_path() / "advlab_catalog_test.json";
  save_task_catalog(path, tasks);
  const auto loaded = load_task_catalog(path);
  ASSERT_EQ(loaded.size(), tasks.size());
  for (std::size_t i = 0; i < tasks.size(); ++i) EXPECT_EQ(task_to_json(loaded[i]), task_to_json(tasks[i]));
  std::filesystem::remove(path);
}

TEST(TaskCatalog, UnknownIdListsValidOnes) {
  try {
    find_task("nope");
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("lc_corrupt"), std::string::npos);
  }
}

TEST(TaskCatalog, ValidationRejectsBadSpecs) {
  TaskSpec t = crossing_task(Family::WallCrossing, 9, 4);
  t.grid_size = 10;
  EXPECT_THROW(t.validate(), std::invalid_argument);
  TaskSpec pd = find_task("pd");
  pd.variant = Variant::SwitchOnce;
  EXPECT_THROW(pd.validate(), std::invalid_argument);
}
