#include "advlab/envs/crossing.hpp"
#include "advlab/envs/env.hpp"
#include "advlab/envs/lighthouse.hpp"
#include "advlab/envs/poisoned_doors.hpp"

namespace advlab::envs {

std::unique_ptr<Env> make_env(const TaskSpec& spec, std::uint64_t experiment_seed) {
  switch (spec.family) {
    case Family::PoisonedDoors:
      return std::make_unique<PoisonedDoorsEnv>(spec, experiment_seed);
    case Family::Lighthouse1D:
    case Family::Lighthouse2D:
      return std::make_unique<LighthouseEnv>(spec);
    case Family::WallCrossing:
    case Family::LavaCrossing:
      return std::make_unique<CrossingEnv>(spec);
  }
  return nullptr;
}

}  // namespace advlab::envs
