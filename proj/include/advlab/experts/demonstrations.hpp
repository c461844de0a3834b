#pragma once

#include "advlab/envs/observation.hpp"
#include "advlab/envs/task.hpp"
#include "advlab/experts/experts.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace advlab::experts {

struct DemoStep {
  envs::Observation observation;  // what the student would have seen
  int expert_action = 0;
  int executed_action = 0;
  double reward = 0.0;
  bool done = false;

  friend bool operator==(const DemoStep&, const DemoStep&) = default;
};

struct Demonstration {
  std::string task;
  std::string expert_kind;
  std::uint64_t seed = 0;
  std::vector<std::vector<DemoStep>> episodes;

  std::size_t num_steps() const;
  friend bool operator==(const Demonstration&, const Demonstration&) = default;
};

/// Rolls the expert out with teacher forcing 1. Episode seeds are drawn from
/// the training range; the expert action is sampled from its distribution.
Demonstration record_demonstrations(const envs::TaskSpec& spec, const Expert& expert, int num_episodes,
                                    std::uint64_t seed, std::uint64_t experiment_seed = 0);

/// File layout: magic "ADVLDEMO", u32 version, task, expert kind, u64 seed,
/// u64 episode count, then per episode a u32 step count followed by steps.
inline constexpr std::uint32_t kDemoVersion = 1;

void write_demonstrations(std::ostream& out, const Demonstration& demo);
Demonstration read_demonstrations(std::istream& in);
void save_demonstrations(const std::filesystem::path& path, const Demonstration& demo);
Demonstration load_demonstrations(const std::filesystem::path& path);

}  // namespace advlab::experts
