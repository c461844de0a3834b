#include "advlab/envs/task.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace advlab::envs {
namespace {

using nlohmann::json;

TaskSpec crossing(std::string id, Family family, int size, int obstacles, Variant variant, int corrupt = 0) {
  TaskSpec t;
  t.id = std::move(id);
  t.family = family;
  t.grid_size = size;
  t.num_obstacles = obstacles;
  t.variant = variant;
  t.corrupt_distance = corrupt;
  t.validate();
  return t;
}

json to_json_object(const TaskSpec& t) {
  json j;
  j["id"] = t.id;
  j["family"] = to_string(t.family);
  j["variant"] = to_string(t.variant);
  j["grid_size"] = t.grid_size;
  j["num_obstacles"] = t.num_obstacles;
  j["corrupt_distance"] = t.corrupt_distance;
  j["doors"] = t.doors;
  j["code_length"] = t.code_length;
  j["view_radius"] = t.view_radius;
  j["expert_radius"] = t.expert_radius;
  j["max_episode_steps"] = t.max_episode_steps;
  return j;
}

TaskSpec from_json_object(const json& j) {
  TaskSpec t;
  t.id = j.at("id").get<std::string>();
  t.family = parse_family(j.at("family").get<std::string>());
  t.variant = parse_variant(j.value("variant", std::string("base")));
  t.grid_size = j.value("grid_size", 0);
  t.num_obstacles = j.value("num_obstacles", 0);
  t.corrupt_distance = j.value("corrupt_distance", 0);
  t.doors = j.value("doors", 4);
  t.code_length = j.value("code_length", 10);
  t.view_radius = j.value("view_radius", 1);
  t.expert_radius = j.value("expert_radius", 1);
  t.max_episode_steps = j.value("max_episode_steps", 0);
  t.validate();
  return t;
}

}  // namespace

int TaskSpec::num_actions() const {
  switch (family) {
    case Family::PoisonedDoors:
      return doors + 3;
    case Family::Lighthouse1D:
      return 2;
    case Family::Lighthouse2D:
      return 4;
    case Family::WallCrossing:
    case Family::LavaCrossing:
      return has_switch() ? 4 : 3;
  }
  return 0;
}

int default_max_steps(const TaskSpec& spec) {
  switch (spec.family) {
    case Family::PoisonedDoors:
      return 1 + spec.code_length;
    case Family::Lighthouse1D:
    case Family::Lighthouse2D:
      return 1000;
    case Family::WallCrossing:
    case Family::LavaCrossing:
      return 4 * spec.grid_size * spec.grid_size;
  }
  return 0;
}

void TaskSpec::validate() {
  if (is_crossing()) {
    if (grid_size < 5 || grid_size % 2 == 0) throw std::invalid_argument(id + ": crossing grid size must be odd and >= 5");
    const int per_axis = (grid_size - 3) / 2;
    if (num_obstacles < 0 || num_obstacles > 2 * per_axis) {
      throw std::invalid_argument(id + ": obstacle count does not fit the grid");
    }
    if (variant == Variant::Corrupt && corrupt_distance < 0) throw std::invalid_argument(id + ": negative corrupt distance");
  } else {
    if (variant != Variant::Base) throw std::invalid_argument(id + ": variants apply to crossing tasks only");
  }
  if (family == Family::PoisonedDoors) {
    if (doors < 3) throw std::invalid_argument(id + ": PoisonedDoors needs at least 3 doors");
    if (code_length < 1) throw std::invalid_argument(id + ": code length must be positive");
    if (doors + 3 > 32) throw std::invalid_argument(id + ": too many doors for the action mask");
  }
  if (is_lighthouse()) {
    if (grid_size < 1) throw std::invalid_argument(id + ": lighthouse half-width must be positive");
    if (view_radius < 0 || view_radius > 2 * grid_size) throw std::invalid_argument(id + ": view radius out of range");
    if (expert_radius < 0) throw std::invalid_argument(id + ": expert radius out of range");
  }
  if (max_episode_steps == 0) max_episode_steps = default_max_steps(*this);
  if (max_episode_steps < 1) throw std::invalid_argument(id + ": step limit must be positive");
}

std::string_view to_string(Family f) {
  switch (f) {
    case Family::PoisonedDoors: return "PoisonedDoors";
    case Family::Lighthouse1D: return "Lighthouse1D";
    case Family::Lighthouse2D: return "Lighthouse2D";
    case Family::WallCrossing: return "WallCrossing";
    case Family::LavaCrossing: return "LavaCrossing";
  }
  return "?";
}

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::Base: return "base";
    case Variant::SwitchOnce: return "switch_once";
    case Variant::SwitchFaulty: return "switch_faulty";
    case Variant::Corrupt: return "corrupt";
  }
  return "?";
}

Family parse_family(std::string_view s) {
  for (Family f : {Family::PoisonedDoors, Family::Lighthouse1D, Family::Lighthouse2D, Family::WallCrossing,
                   Family::LavaCrossing}) {
    if (to_string(f) == s) return f;
  }
  throw std::invalid_argument("unknown task family: " + std::string(s));
}

Variant parse_variant(std::string_view s) {
  for (Variant v : {Variant::Base, Variant::SwitchOnce, Variant::SwitchFaulty, Variant::Corrupt}) {
    if (to_string(v) == s) return v;
  }
  throw std::invalid_argument("unknown task variant: " + std::string(s));
}

std::vector<TaskSpec> builtin_tasks() {
  std::vector<TaskSpec> tasks;

  TaskSpec pd;
  pd.id = "pd";
  pd.family = Family::PoisonedDoors;
  pd.doors = 4;
  pd.code_length = 10;
  pd.validate();
  tasks.push_back(pd);

  TaskSpec lh;
  lh.id = "lh2d";
  lh.family = Family::Lighthouse2D;
  lh.grid_size = 15;
  lh.view_radius = 1;
  lh.expert_radius = 2 * lh.grid_size;
  lh.validate();
  tasks.push_back(lh);

  tasks.push_back(crossing("wc", Family::WallCrossing, 25, 10, Variant::Base));
  tasks.push_back(crossing("lc", Family::LavaCrossing, 25, 10, Variant::Base));
  tasks.push_back(crossing("wc_once", Family::WallCrossing, 25, 10, Variant::SwitchOnce));
  tasks.push_back(crossing("lc_once", Family::LavaCrossing, 15, 7, Variant::SwitchOnce));
  tasks.push_back(crossing("wc_faulty", Family::WallCrossing, 15, 7, Variant::SwitchFaulty));
  tasks.push_back(crossing("lc_faulty", Family::LavaCrossing, 9, 4, Variant::SwitchFaulty));
  tasks.push_back(crossing("wc_corrupt", Family::WallCrossing, 25, 10, Variant::Corrupt, 15));
  tasks.push_back(crossing("lc_corrupt", Family::LavaCrossing, 15, 7, Variant::Corrupt, 10));
  return tasks;
}

TaskSpec find_task(std::string_view id, const std::vector<TaskSpec>& catalog) {
  const std::vector<TaskSpec> builtin = catalog.empty() ? builtin_tasks() : std::vector<TaskSpec>{};
  const auto& tasks = catalog.empty() ? builtin : catalog;
  for (const auto& t : tasks) {
    if (t.id == id) return t;
  }
  std::string valid;
  for (const auto& t : tasks) valid += (valid.empty() ? "" : ", ") + t.id;
  throw std::invalid_argument("unknown task '" + std::string(id) + "'; valid ids: " + valid);
}

std::string task_to_json(const TaskSpec& spec) { return to_json_object(spec).dump(); }

TaskSpec task_from_json(const std::string& text) { return from_json_object(json::parse(text)); }

std::vector<TaskSpec> load_task_catalog(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open task catalog " + path.string());
  const json doc = json::parse(in);
  std::vector<TaskSpec> tasks;
  for (const auto& entry : doc.at("tasks")) tasks.push_back(from_json_object(entry));
  return tasks;
}

void save_task_catalog(const std::filesystem::path& path, const std::vector<TaskSpec>& tasks) {
  json doc;
  doc["schema"] = 1;
  doc["tasks"] = json::array();
  for (const auto& t : tasks) doc["tasks"].push_back(to_json_object(t));
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write task catalog " + path.string());
  out << doc.dump(2) << '\n';
}

}  // namespace advlab::envs
