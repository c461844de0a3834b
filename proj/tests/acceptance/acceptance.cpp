// Acceptance suite: one [PASS]/[FAIL] line per criterion.
//
// 1-7 are analytic or oracle checks and take seconds. 8-11 train scaled-down
// experiments (about an hour on one core). 12 re-runs short trainings.

#include "advlab/envs/lighthouse.hpp"
#include "advlab/envs/task.hpp"
#include "advlab/experts/experts.hpp"
#include "advlab/harness/expected_max.hpp"
#include "advlab/harness/records.hpp"
#include "advlab/harness/training.hpp"
#include "advlab/learn/advantage.hpp"
#include "advlab/learn/losses.hpp"

#include "../support/checks.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

using namespace advlab;
namespace fs = std::filesystem;

namespace {

// ---- tolerances and experiment settings

constexpr double kOracleTol = 1e-6;        // 1
constexpr double kUstatTol = 1e-12;        // 3
constexpr double kGradTol = 1e-4;          // 4
constexpr double kGaeTol = 1e-10;          // 6

constexpr int kRunsPerMethod = 5;          // 8, 10, 11
constexpr int kLighthouseRuns = 10;        // 9
constexpr std::int64_t kPdSteps = 300'000;
constexpr std::int64_t kLighthouseSteps = 300'000;
constexpr std::int64_t kCrossingSteps = 200'000;

constexpr double kPdLr = 1e-3;
constexpr double kLighthouseLr = 1e-2;
constexpr double kCrossingLr = 1e-3;
constexpr double kAlpha = 5.0;
constexpr double kSplit = 0.5;  // DAgger's annealing stage

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Context {
  std::vector<envs::TaskSpec> catalog;
  fs::path out;
  bool verbose = false;

  envs::TaskSpec task(const std::string& id) const { return envs::find_task(id, catalog); }

  harness::RunRecord train(const std::string& task_id, learn::MethodId method, double lr, std::uint64_t seed,
                           std::int64_t steps) const {
    harness::TrainConfig c;
    c.task = task(task_id);
    c.method.method = method;
    c.method.lr = lr;
    const auto& info = learn::method_info(method);
    if (info.searches_alpha) c.method.alpha = kAlpha;
    if (info.searches_split) c.method.stage_split = kSplit;
    c.budget_steps = steps;
    c.seed = seed;
    c.hp_seed = 0;
    const auto started = std::chrono::steady_clock::now();
    auto rec = harness::run_training(c).record;
    const fs::path path = out / task_id / std::string(info.key) / ("run_seed" + std::to_string(seed) + ".jsonl");
    fs::create_directories(path.parent_path());
    harness::save_record(path, rec);
    if (verbose) {
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
      std::fprintf(stderr, "  %s %s seed %llu: final reward %.3f success %.3f length %.1f (%.0fs)\n", task_id.c_str(),
                   std::string(info.key).c_str(), static_cast<unsigned long long>(seed), rec.validation.back().reward,
                   rec.validation.back().success, rec.validation.back().episode_length, secs);
    }
    return rec;
  }
};

std::string list(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : " ") + fmt("%.2f", x);
  return s;
}

// ---- 1: tabular imitation on 1D lighthouse

// argmin over p of -(a log p + b log(1-p)) by golden-section search.
double minimise_two_action_ce(double a, double b) {
  auto f = [&](double p) { return -(a * std::log(p) + b * std::log(1 - p)); };
  double lo = 1e-15, hi = 1 - 1e-15;
  const double g = (std::sqrt(5.0) - 1) / 2;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > 1e-13) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    }
  }
  return (lo + hi) / 2;
}

Outcome policy_averaging(const Context&) {
  constexpr int n = 4, i = 1, depth = 10;
  envs::TaskSpec spec;
  spec.id = "lh1d";
  spec.family = envs::Family::Lighthouse1D;
  spec.grid_size = n;
  spec.view_radius = i;
  spec.expert_radius = n;
  spec.validate();
  experts::LighthouseExpert expert(n);

  // every state reachable within `depth` steps from either start, counted once
  struct Fiber {
    double expert_right = 0;
    int count = 0;
    bool corner_seen = false;
  };
  std::map<std::vector<std::int32_t>, Fiber> fibers;
  std::set<std::string> seen;
  std::function<void(const envs::LighthouseEnv&, int)> visit = [&](const envs::LighthouseEnv& env, int d) {
    if (!seen.insert(env.state_bytes()).second) return;
    const auto obs = env.observe().tokens;
    auto& fib = fibers[obs];
    fib.expert_right += expert.distribution(env)(1);
    ++fib.count;
    fib.corner_seen = std::any_of(obs.begin() + 1, obs.end() - static_cast<long>(env.trajectory().size() - 1),
                                  [](std::int32_t c) { return c != 0; });
    if (d == depth) return;
    for (int a = 0; a < 2; ++a) {
      envs::LighthouseEnv next = env;
      next.step(a);
      if (!next.done()) visit(next, d + 1);
    }
  };
  for (int goal = 0; goal < 2; ++goal) {
    envs::LighthouseEnv env(spec);
    env.reset_with_goal(goal);
    visit(env, 0);
  }

  double worst = 0, worst_blind = 0;
  int blind = 0;
  for (const auto& [obs, fib] : fibers) {
    const double mean = fib.expert_right / fib.count;
    const double tabular = minimise_two_action_ce(fib.expert_right, fib.count - fib.expert_right);
    worst = std::max(worst, std::abs(tabular - mean));
    if (!fib.corner_seen) {
      ++blind;
      worst_blind = std::max(worst_blind, std::abs(tabular - 0.5));
    }
  }
  const bool pass = worst < kOracleTol && worst_blind < kOracleTol && blind > 0;
  return {pass, fmt("%zu states, %zu observations (%d blind); max |tabular - E[expert|o]| = %.1e, "
                    "max |tabular - 0.5| on blind observations = %.1e",
                    seen.size(), fibers.size(), blind, worst, worst_blind)};
}

// ---- 2: expected episode length of the f^i-optimal lighthouse policy

Outcome lighthouse_length(const Context&) {
  bool pass = true;
  std::string detail;
  for (int n : {4, 8}) {
    for (int i = 0; i <= n; ++i) {
      envs::TaskSpec spec;
      spec.id = "lh1d";
      spec.family = envs::Family::Lighthouse1D;
      spec.grid_size = n;
      spec.view_radius = i;
      spec.expert_radius = i;
      spec.validate();
      envs::LighthouseEnv env(spec);
      experts::LighthouseExpert expert(i);
      double total = 0;
      for (int goal = 0; goal < 2; ++goal) {
        env.reset_with_goal(goal);
        while (!env.done()) {
          Eigen::Index a = 0;
          expert.distribution(env).maxCoeff(&a);
          env.step(static_cast<int>(a));
        }
        pass = pass && env.succeeded();
        total += env.elapsed_steps();
      }
      const double formula = 0.5 * n + 0.5 * (3 * n - 2 * i);
      if (total / 2 != formula) {
        pass = false;
        detail += fmt(" N=%d i=%d: %.1f vs %.1f;", n, i, total / 2, formula);
      }
    }
  }
  return {pass, pass ? "N in {4, 8}, i = 0..N: simulated mean equals 0.5N + 0.5(3N - 2i) exactly" : detail};
}

// ---- 3: expected max against subset enumeration

Outcome expected_max(const Context&) {
  Rng rng(31);
  double worst = 0;
  bool monotone = true;
  int cases = 0;
  for (int n = 1; n <= 8; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> v(static_cast<std::size_t>(n));
      for (auto& x : v) x = trial % 2 ? rng.normal() : std::round(rng.uniform(-2, 2));
      double prev = -1e300;
      for (int k = 1; k <= n; ++k) {
        double total = 0;
        int count = 0;
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
          if (__builtin_popcount(mask) != k) continue;
          double m = -1e300;
          for (int b = 0; b < n; ++b)
            if (mask >> b & 1u) m = std::max(m, v[static_cast<std::size_t>(b)]);
          total += m;
          ++count;
        }
        const double got = harness::expected_max_ustat(v, k);
        worst = std::max(worst, std::abs(got - total / count));
        monotone = monotone && got >= prev - 1e-12;
        prev = got;
        ++cases;
      }
    }
  }
  return {worst < kUstatTol && monotone, fmt("%d (sample, k) cases, max |ustat - enumeration| = %.1e, monotone in k: %s",
                                             cases, worst, monotone ? "yes" : "no")};
}

// ---- 4 and 7: gradients and head isolation

envs::TaskSpec grid_task() {
  envs::TaskSpec t;
  t.id = "grid";
  t.family = envs::Family::LavaCrossing;
  t.grid_size = 9;
  t.num_obstacles = 4;
  t.variant = envs::Variant::SwitchOnce;
  t.validate();
  return t;
}

envs::TaskSpec lighthouse_task() {
  envs::TaskSpec t = envs::find_task("lh2d");
  t.grid_size = 4;
  t.validate();
  return t;
}

Outcome gradients(const Context&) {
  double worst = 0;
  std::string where;
  int checked = 0;
  const char* names[] = {"BC", "PPO", "ADVISOR"};
  for (const auto& spec : {lighthouse_task(), envs::find_task("pd"), grid_task()}) {
    for (std::uint64_t trial = 0; trial < 3; ++trial) {
      auto policy = learn::make_policy(spec, 100 + trial);
      Rng rng(trial, 0x3);
      for (auto& [name, t] : policy->params())
        for (learn::Index i = 0; i < t.size(); ++i) t.value.data()[i] += 0.05 * rng.normal();
      const auto mb = checks::random_minibatch(spec, *policy, 3, 8, 40 + trial);
      for (auto kind : {checks::LossKind::Bc, checks::LossKind::Ppo, checks::LossKind::Advisor}) {
        const auto config = checks::loss_config(kind, *policy, mb);
        const auto g = checks::gradient_check(*policy, mb, config, 10, trial);
        checked += g.checked;
        if (g.max_rel_error >= worst) {
          worst = g.max_rel_error;
          where = spec.id + "/" + names[static_cast<int>(kind)] + " " + g.worst;
        }
      }
    }
  }
  return {worst < kGradTol, fmt("%d entries over 3 architectures x 3 losses x 3 minibatches, max relative error %.1e (%s)",
                                checked, worst, where.c_str())};
}

Outcome isolation(const Context&) {
  bool pass = true;
  std::string detail;
  for (const auto& spec : {lighthouse_task(), envs::find_task("pd"), grid_task()}) {
    auto policy = learn::make_policy(spec, 5);
    const auto mb = checks::random_minibatch(spec, *policy, 4, 10, 6);
    const auto iso = checks::aux_isolation(*policy, mb);
    const bool ok = iso.ppo_leaves_aux && iso.aux_leaves_main && iso.ppo_reaches_main && iso.aux_reaches_aux;
    pass = pass && ok;
    detail += fmt("%s %s; ", spec.id.c_str(), ok ? "exact zeros" : "LEAK");
  }
  return {pass, detail + "d(PPO)/d(aux head) and d(aux CE)/d(main head) checked"};
}

// ---- 5: weight function

Outcome weight_function(const Context&) {
  const double inf = std::numeric_limits<double>::infinity();
  bool pass = learn::advisor_weight_from_kl(0.0, {kAlpha, inf}) == 1.0;
  const double half = learn::advisor_weight_from_kl(std::log(2.0) / 5.0, {5.0, inf});
  pass = pass && std::abs(half - 0.5) < 1e-15;
  for (double alpha : {0.0, 1.0, 5.0, 20.0}) {
    for (double beta : {0.05, 0.5, inf}) {
      double prev = 1.0;
      for (double x = 0.0; x <= 5.0; x += 1e-3) {
        const double w = learn::advisor_weight_from_kl(x, {alpha, beta});
        pass = pass && w <= prev && w >= 0.0 && w <= 1.0 && (x <= beta || w == 0.0);
        prev = w;
      }
    }
  }
  return {pass, fmt("w(0) = 1, w(ln2/5; alpha 5) = %.15f, non-increasing and zero past beta on a 1e-3 grid", half)};
}

// ---- 6: GAE

Outcome gae(const Context&) {
  Rng rng(66);
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int len = 1 + static_cast<int>(rng.integer(0, 100));
    std::vector<double> r(static_cast<std::size_t>(len)), v(r.size());
    std::vector<bool> d(r.size());
    for (std::size_t t = 0; t < r.size(); ++t) {
      r[t] = rng.normal();
      v[t] = rng.normal();
      d[t] = rng.bernoulli(0.1);
    }
    const double boot = rng.normal();
    const auto got = learn::gae_advantages(r, v, d, boot, 0.99, 1.0);
    for (std::size_t t = 0; t < r.size(); ++t) {
      double g = 0, disc = 1;
      std::size_t k = t;
      for (; k < r.size(); ++k) {
        g += disc * r[k];
        disc *= 0.99;
        if (d[k]) break;
      }
      if (k == r.size()) g += disc * boot;
      worst = std::max(worst, std::abs(got.advantages[t] - (g - v[t])));
    }
  }
  return {worst < kGaeTol, fmt("1000 random segments, max |GAE - (return-to-go - value)| = %.1e", worst)};
}

// ---- 8: PoisonedDoors

Outcome poisoned_doors(const Context& ctx) {
  using M = learn::MethodId;
  std::map<M, std::vector<double>> rewards;
  for (M m : {M::Adv, M::Ppo, M::Bc, M::Dagger, M::BcTf1}) {
    for (int s = 1; s <= kRunsPerMethod; ++s) {
      rewards[m].push_back(ctx.train("pd", m, kPdLr, static_cast<std::uint64_t>(s), kPdSteps).validation.back().reward);
    }
  }
  auto best = [&](M m) { return *std::max_element(rewards[m].begin(), rewards[m].end()); };
  bool il_ok = true;
  double il_best = -1e9;
  for (M m : {M::Bc, M::Dagger, M::BcTf1}) {
    for (double r : rewards[m]) il_ok = il_ok && r >= -1.0 && r <= 0.1;
    il_best = std::max(il_best, best(m));
  }
  bool ppo_ok = true;
  for (double r : rewards[M::Ppo]) ppo_ok = ppo_ok && r >= -0.5 && r <= 0.3;
  const bool order = best(M::Adv) > best(M::Ppo) && best(M::Ppo) > il_best;
  const bool pass = best(M::Adv) >= 0.5 && il_ok && ppo_ok && order;
  return {pass, fmt("final rewards: ADV [%s] PPO [%s] BC [%s] DAgger [%s] BCtf1 [%s]", list(rewards[M::Adv]).c_str(),
                    list(rewards[M::Ppo]).c_str(), list(rewards[M::Bc]).c_str(), list(rewards[M::Dagger]).c_str(),
                    list(rewards[M::BcTf1]).c_str())};
}

// ---- 9: 2D lighthouse imitation gap

Outcome lighthouse_gap(const Context& ctx) {
  using M = learn::MethodId;
  auto mean_length = [&](const std::string& task, M m) {
    double total = 0;
    for (int s = 1; s <= kLighthouseRuns; ++s) {
      total += ctx.train(task, m, kLighthouseLr, static_cast<std::uint64_t>(s), kLighthouseSteps)
                   .validation.back()
                   .episode_length;
    }
    return total / kLighthouseRuns;
  };
  const double bc_j1 = mean_length("lh2d_n7_j1", M::Bc);
  const double bc_full = mean_length("lh2d_n7_jfull", M::Bc);
  const double adv_full = mean_length("lh2d_n7_jfull", M::Adv);
  const bool pass = bc_full >= 1.5 * bc_j1 && adv_full < bc_full;
  return {pass, fmt("mean episode length: BC(j=1) %.1f, BC(j=full) %.1f (ratio %.2f), ADV(j=full) %.1f", bc_j1, bc_full,
                    bc_full / bc_j1, adv_full)};
}

// ---- 10 and 11: crossing tasks

std::vector<double> successes(const Context& ctx, const std::string& task, learn::MethodId m) {
  std::vector<double> v;
  for (int s = 1; s <= kRunsPerMethod; ++s)
    v.push_back(ctx.train(task, m, kCrossingLr, static_cast<std::uint64_t>(s), kCrossingSteps).validation.back().success);
  return v;
}

Outcome lava_switch(const Context& ctx) {
  const auto adv = successes(ctx, "lc_once_s9", learn::MethodId::Adv);
  const auto tf1 = successes(ctx, "lc_once_s9", learn::MethodId::BcTf1);
  const double ba = *std::max_element(adv.begin(), adv.end()), bt = *std::max_element(tf1.begin(), tf1.end());
  return {ba >= 0.5 && bt <= 0.2, fmt("final success: ADV [%s] (best %.2f), BCtf1 [%s] (best %.2f)", list(adv).c_str(), ba,
                                      list(tf1).c_str(), bt)};
}

Outcome corrupt_expert(const Context& ctx) {
  const auto adv = successes(ctx, "wc_corrupt_s9", learn::MethodId::Adv);
  const auto bc = successes(ctx, "wc_corrupt_s9", learn::MethodId::Bc);
  const double ba = *std::max_element(adv.begin(), adv.end()), bb = *std::max_element(bc.begin(), bc.end());
  return {ba >= bb, fmt("final success: ADV [%s] (best %.2f), BC [%s] (best %.2f)", list(adv).c_str(), ba, list(bc).c_str(),
                        bb)};
}

// ---- 12: determinism

Outcome determinism(const Context& ctx) {
  using M = learn::MethodId;
  bool pass = true;
  std::string detail;
  const std::tuple<const char*, M, std::int64_t> runs[] = {
      {"pd", M::Adv, 20'000}, {"lh2d_n7_jfull", M::DaggerThenAdv, 20'000}, {"lc_once_s9", M::AdvDemoPlusPpo, 6'000}};
  for (const auto& [task, m, steps] : runs) {
    const Context quiet{ctx.catalog, ctx.out / "determinism", false};
    const auto a = quiet.train(task, m, 1e-3, 7, steps);
    const auto b = quiet.train(task, m, 1e-3, 7, steps);
    const bool same = a.same_trace(b);
    pass = pass && same;
    detail += fmt("%s/%s %zu points %s; ", task, std::string(learn::method_info(m).key).c_str(), a.validation.size(),
                  same ? "identical" : "DIFFER");
  }
  return {pass, detail};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::vector<int> only;
  std::string catalog = ADVLAB_CONFIG_DIR "/tasks.json";
  std::string out = "acceptance_runs";
  bool verbose = false;
  app.add_option("--only", only, "criteria to run (default all)");
  app.add_option("--tasks", catalog, "task catalog");
  app.add_option("--out", out, "where run records go");
  app.add_flag("-v,--verbose", verbose, "per-run progress on stderr");
  CLI11_PARSE(app, argc, argv);

  Context ctx{envs::load_task_catalog(catalog), harness::output_root(out), verbose};
  const std::vector<std::pair<const char*, Outcome (*)(const Context&)>> criteria = {
      {"policy averaging on 1D lighthouse", policy_averaging},
      {"expected episode length closed form", lighthouse_length},
      {"expected max vs subset enumeration", expected_max},
      {"gradient checks", gradients},
      {"advisor weight function", weight_function},
      {"GAE equals return-to-go minus value", gae},
      {"auxiliary head isolation", isolation},
      {"PoisonedDoors", poisoned_doors},
      {"2D lighthouse imitation gap", lighthouse_gap},
      {"LavaCrossing switch (scaled)", lava_switch},
      {"corrupt expert (scaled)", corrupt_expert},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    Outcome o;
    try {
      o = criteria[k].second(ctx);
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("[%s] %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, criteria[k].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
