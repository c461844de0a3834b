#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace advlab::envs {

enum class Family { PoisonedDoors, Lighthouse1D, Lighthouse2D, WallCrossing, LavaCrossing };
enum class Variant { Base, SwitchOnce, SwitchFaulty, Corrupt };

/// Immutable task configuration.
///
/// grid_size is S (odd, walls included) for crossing tasks and the half-width N
/// for lighthouse tasks. view_radius is the student's lighthouse view i and
/// expert_radius the expert's privilege j; an expert_radius of at least 2N
/// sees the whole grid.
struct TaskSpec {
  std::string id;
  Family family = Family::PoisonedDoors;
  int grid_size = 0;
  int num_obstacles = 0;
  Variant variant = Variant::Base;
  int corrupt_distance = 0;
  int doors = 4;
  int code_length = 10;
  int view_radius = 1;
  int expert_radius = 1;
  int max_episode_steps = 0;

  bool is_crossing() const { return family == Family::WallCrossing || family == Family::LavaCrossing; }
  bool is_lighthouse() const { return family == Family::Lighthouse1D || family == Family::Lighthouse2D; }
  bool has_switch() const { return variant == Variant::SwitchOnce || variant == Variant::SwitchFaulty; }
  int num_actions() const;

  /// Checks field consistency and fills in the derived step limit when zero.
  void validate();

  friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

std::string_view to_string(Family f);
std::string_view to_string(Variant v);
Family parse_family(std::string_view s);
Variant parse_variant(std::string_view s);

/// Step limits: 4*S^2 for crossing, 1000 for lighthouse, 1 + M for PoisonedDoors.
int default_max_steps(const TaskSpec& spec);

/// The ten benchmark tasks at their published sizes.
std::vector<TaskSpec> builtin_tasks();

/// Looks a task up among `catalog` (builtin when empty); throws with the list of valid ids.
TaskSpec find_task(std::string_view id, const std::vector<TaskSpec>& catalog = {});

std::string task_to_json(const TaskSpec& spec);
TaskSpec task_from_json(const std::string& json);

std::vector<TaskSpec> load_task_catalog(const std::filesystem::path& path);
void save_task_catalog(const std::filesystem::path& path, const std::vector<TaskSpec>& tasks);

}  // namespace advlab::envs
