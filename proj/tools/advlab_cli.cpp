// advlab: train, sweep, evaluate and summarise imitation/RL runs.

#include "advlab/diff/checkpoint.hpp"
#include "advlab/experts/demonstrations.hpp"
#include "advlab/harness/evaluation.hpp"
#include "advlab/harness/hparams.hpp"
#include "advlab/harness/records.hpp"
#include "advlab/harness/training.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <thread>

namespace fs = std::filesystem;
using namespace advlab;

namespace {

struct Common {
  std::string config;
  std::string catalog;
  std::string task;
  std::string method;
  std::optional<std::int64_t> steps;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<double> lr, stage_split, alpha, beta;
  std::optional<int> validation_episodes, demo_episodes;
};

// Config file values fill in whatever the flags left unset.
void apply_config(Common& c) {
  if (c.config.empty()) return;
  std::ifstream in(c.config);
  if (!in) throw std::runtime_error("cannot open config " + c.config);
  const auto j = nlohmann::json::parse(in);
  auto str = [&](const char* key, std::string& dst) {
    if (dst.empty() && j.contains(key)) dst = j[key].get<std::string>();
  };
  str("task", c.task);
  str("method", c.method);
  str("out", c.out);
  str("tasks", c.catalog);
  if (!c.steps && j.contains("steps")) c.steps = j["steps"].get<std::int64_t>();
  if (!c.seed && j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (!c.lr && j.contains("lr")) c.lr = j["lr"].get<double>();
  if (!c.stage_split && j.contains("stage_split")) c.stage_split = j["stage_split"].get<double>();
  if (!c.alpha && j.contains("alpha")) c.alpha = j["alpha"].get<double>();
  if (!c.beta && j.contains("beta")) c.beta = j["beta"].get<double>();
  if (!c.validation_episodes && j.contains("validation_episodes")) c.validation_episodes = j["validation_episodes"].get<int>();
  if (!c.demo_episodes && j.contains("demo_episodes")) c.demo_episodes = j["demo_episodes"].get<int>();

  // "methods": {"adv": {"lr": ..., "alpha": ...}, ...} holds per-method hyperparameters
  if (c.method.empty() || !j.contains("methods")) return;
  const learn::MethodId id = learn::parse_method(c.method);
  for (const auto& [key, hp] : j["methods"].items()) {
    if (learn::parse_method(key) != id) continue;
    if (!c.lr && hp.contains("lr")) c.lr = hp["lr"].get<double>();
    if (!c.stage_split && hp.contains("stage_split")) c.stage_split = hp["stage_split"].get<double>();
    if (!c.alpha && hp.contains("alpha")) c.alpha = hp["alpha"].get<double>();
    if (!c.beta && hp.contains("beta")) c.beta = hp["beta"].get<double>();
  }
}

void add_common(CLI::App* app, Common& c, bool with_method) {
  app->add_option("--config", c.config, "JSON config file; flags take precedence");
  app->add_option("--tasks", c.catalog, "task catalog JSON (default: built-in tasks)");
  app->add_option("--task", c.task, "task id");
  if (with_method) {
    app->add_option("--method", c.method, "method id");
    app->add_option("--steps", c.steps, "training budget in environment steps");
    app->add_option("--lr", c.lr);
    app->add_option("--stage-split", c.stage_split);
    app->add_option("--alpha", c.alpha);
    app->add_option("--beta", c.beta);
    app->add_option("--validation-episodes", c.validation_episodes);
    app->add_option("--demo-episodes", c.demo_episodes);
  }
  app->add_option("--seed", c.seed, "seed");
  app->add_option("--out", c.out, "output directory (default $ADVLAB_OUT or runs/)");
}

envs::TaskSpec resolve_task(const Common& c) {
  if (c.task.empty()) throw CLI::ValidationError("--task is required");
  const auto catalog = c.catalog.empty() ? std::vector<envs::TaskSpec>{} : envs::load_task_catalog(c.catalog);
  return envs::find_task(c.task, catalog);
}

fs::path out_dir(const Common& c) { return c.out.empty() ? harness::output_root("runs") : fs::path(c.out); }

harness::TrainConfig train_config(const Common& c, std::uint64_t seed, std::uint64_t hp_seed, bool sample) {
  harness::TrainConfig cfg;
  cfg.task = resolve_task(c);
  if (c.method.empty()) throw CLI::ValidationError("--method is required");
  const learn::MethodId id = learn::parse_method(c.method);
  cfg.method = sample ? harness::sample_hps(id, hp_seed) : harness::sample_hps(id, seed);
  cfg.hp_seed = sample ? hp_seed : seed;
  if (c.lr) cfg.method.lr = *c.lr;
  if (c.stage_split) cfg.method.stage_split = *c.stage_split;
  if (c.alpha) cfg.method.alpha = *c.alpha;
  if (c.beta) cfg.method.beta = *c.beta;
  cfg.method.validate();
  cfg.budget_steps = c.steps.value_or(300'000);
  cfg.seed = seed;
  if (c.validation_episodes) cfg.validation_episodes = *c.validation_episodes;
  if (c.demo_episodes) cfg.demo_episodes = *c.demo_episodes;
  return cfg;
}

fs::path run_stem(const harness::TrainConfig& cfg, const fs::path& root) {
  return root / cfg.task.id / std::string(learn::method_info(cfg.method.method).key) /
         ("run_seed" + std::to_string(cfg.seed) + "_hp" + std::to_string(cfg.hp_seed));
}

void run_one(harness::TrainConfig cfg, const fs::path& root) {
  const fs::path stem = run_stem(cfg, root);
  cfg.checkpoint = fs::path(stem.string() + ".ckpt");
  const auto result = harness::run_training(cfg);
  harness::save_record(stem.string() + ".jsonl", result.record);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"advlab: imitation-gap experiments"};
  app.require_subcommand(1);

  Common train_opts;
  auto* train = app.add_subcommand("train", "one training run");
  add_common(train, train_opts, true);

  Common sweep_opts;
  int sweep_n = 5;
  int jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "n runs of one method with sampled hyperparameters");
  add_common(sweep, sweep_opts, true);
  sweep->add_option("--n", sweep_n, "number of runs")->check(CLI::PositiveNumber);
  sweep->add_option("--jobs", jobs, "concurrent runs")->check(CLI::PositiveNumber);

  std::string ckpt_path;
  int eval_episodes = 200;
  auto* eval = app.add_subcommand("eval", "evaluate a checkpoint on the validation episodes");
  eval->add_option("--checkpoint", ckpt_path, "checkpoint file")->required();
  eval->add_option("--episodes", eval_episodes)->check(CLI::PositiveNumber);

  std::vector<std::string> record_paths;
  std::string report_out;
  int resamples = 1000;
  auto* report = app.add_subcommand("report", "fold run records into a sweep report");
  report->add_option("records", record_paths, "record files or directories")->required();
  report->add_option("--out", report_out, "report path (default: stdout)");
  report->add_option("--resamples", resamples)->check(CLI::PositiveNumber);

  Common demo_opts;
  int demo_episodes = 500;
  auto* demos = app.add_subcommand("demos", "record expert demonstrations");
  add_common(demos, demo_opts, false);
  demos->add_option("--episodes", demo_episodes)->check(CLI::NonNegativeNumber);

  std::string tasks_catalog;
  auto* tasks = app.add_subcommand("tasks", "print the task catalog");
  tasks->add_option("--tasks", tasks_catalog);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) {
      apply_config(train_opts);
      const std::uint64_t seed = train_opts.seed.value_or(0);
      run_one(train_config(train_opts, seed, seed, false), out_dir(train_opts));
    } else if (*sweep) {
      apply_config(sweep_opts);
      const std::uint64_t base = sweep_opts.seed.value_or(0);
      std::vector<harness::TrainConfig> configs;
      for (int i = 0; i < sweep_n; ++i) {
        const std::uint64_t s = base + static_cast<std::uint64_t>(i);
        configs.push_back(train_config(sweep_opts, s, s, true));
      }
      const fs::path root = out_dir(sweep_opts);
      std::atomic<std::size_t> next{0};
      std::mutex err_mu;
      std::string first_error;
      auto worker = [&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) {
          try {
            run_one(configs[i], root);
          } catch (const std::exception& e) {
            std::lock_guard lock(err_mu);
            if (first_error.empty()) first_error = e.what();
          }
        }
      };
      std::vector<std::thread> pool;
      for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
      if (!first_error.empty()) throw std::runtime_error(first_error);
    } else if (*eval) {
      const auto info = harness::parse_checkpoint_metadata(diff::read_checkpoint_metadata(ckpt_path));
      auto policy = learn::make_policy(info.task, info.seed);
      diff::load_checkpoint(ckpt_path, policy->params());
      const auto m = harness::evaluate_policy(*policy, info.task, eval_episodes, info.seed);
      nlohmann::json j{{"task", info.task.id},
                       {"method", info.method},
                       {"episodes", m.episodes},
                       {"mean_reward", m.mean_reward},
                       {"success_rate", m.success_rate},
                       {"mean_length", m.mean_length}};
      std::cout << j.dump(2) << '\n';
    } else if (*report) {
      std::vector<harness::RunRecord> records;
      for (const auto& p : record_paths) {
        if (fs::is_directory(p)) {
          std::vector<fs::path> files;
          for (const auto& e : fs::recursive_directory_iterator(p)) {
            if (e.is_regular_file() && e.path().extension() == ".jsonl") files.push_back(e.path());
          }
          std::sort(files.begin(), files.end());
          for (const auto& f : files) records.push_back(harness::load_record(f));
        } else {
          records.push_back(harness::load_record(p));
        }
      }
      const std::string doc = harness::report_to_json(harness::build_report(records, resamples));
      if (report_out.empty()) {
        std::cout << doc << '\n';
      } else {
        std::ofstream(report_out) << doc << '\n';
      }
    } else if (*demos) {
      apply_config(demo_opts);
      const auto task = resolve_task(demo_opts);
      const std::uint64_t seed = demo_opts.seed.value_or(0);
      const auto expert = experts::make_expert(task);
      const auto demo = experts::record_demonstrations(task, *expert, demo_episodes, seed, seed);
      const fs::path path = out_dir(demo_opts) / (task.id + "_demos_seed" + std::to_string(seed) + ".bin");
      fs::create_directories(path.parent_path());
      experts::save_demonstrations(path, demo);
      std::cout << path.string() << '\n';
    } else if (*tasks) {
      const auto catalog = tasks_catalog.empty() ? envs::builtin_tasks() : envs::load_task_catalog(tasks_catalog);
      for (const auto& t : catalog) std::cout << envs::task_to_json(t) << '\n';
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "advlab: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
