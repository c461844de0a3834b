#include "advlab/harness/training.hpp"

#include "advlab/diff/adam.hpp"
#include "advlab/diff/checkpoint.hpp"
#include "advlab/experts/demonstrations.hpp"
#include "advlab/harness/evaluation.hpp"
#include "advlab/rollout/demo_sampler.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace advlab::harness {
namespace {

struct NonFinite : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace

learn::LossResult optimise_minibatch(learn::PolicyNet& policy, diff::Adam& adam, const rollout::Minibatch& mb,
                                     const learn::LossConfig& loss, double lr, double max_grad_norm) {
  policy.params().zero_grad();
  const learn::NetOutput out = policy.forward(mb.input, true);
  learn::LossResult r = learn::compute_loss(out.main_probs, out.aux_probs, out.values, mb.targets, loss);
  if (!std::isfinite(r.total)) throw NonFinite("non-finite loss");
  policy.backward(mb.input, out, r.d_main_logits, r.d_aux_logits, r.d_values);
  if (!std::isfinite(diff::clip_global_norm(policy.params(), max_grad_norm))) throw NonFinite("non-finite gradient");
  adam.step(policy.params(), lr);
  return r;
}

std::string checkpoint_metadata(const TrainConfig& c) {
  nlohmann::json j;
  j["task_spec"] = nlohmann::json::parse(envs::task_to_json(c.task));
  j["method"] = std::string(learn::method_info(c.method.method).key);
  j["seed"] = c.seed;
  return j.dump();
}

CheckpointInfo parse_checkpoint_metadata(const std::string& metadata) {
  const auto j = nlohmann::json::parse(metadata);
  CheckpointInfo info;
  info.task = envs::task_from_json(j.at("task_spec").dump());
  info.method = j.at("method").get<std::string>();
  info.seed = j.at("seed").get<std::uint64_t>();
  return info;
}

TrainResult run_training(const TrainConfig& cfg) {
  cfg.method.validate();
  if (cfg.budget_steps < 0) throw std::invalid_argument("run_training: negative budget");
  const auto started = std::chrono::steady_clock::now();
  const auto& info = learn::method_info(cfg.method.method);

  TrainResult result;
  RunRecord& rec = result.record;
  rec.task = cfg.task;
  rec.hps = cfg.method;
  rec.hp_seed = cfg.hp_seed;
  rec.seed = cfg.seed;
  rec.budget_steps = cfg.budget_steps;

  result.policy = learn::make_policy(cfg.task, cfg.seed);
  learn::PolicyNet& policy = *result.policy;
  diff::Adam adam(policy.params());
  const auto expert = experts::make_expert(cfg.task);

  std::optional<experts::Demonstration> demo;
  std::optional<rollout::DemoSampler> sampler;
  if (info.uses_demos) {
    demo = experts::record_demonstrations(cfg.task, *expert, cfg.demo_episodes, cfg.seed, cfg.seed);
    sampler.emplace(*demo, policy.num_actions(), cfg.seed);
  }

  rollout::Collector collector(cfg.task, cfg.seed, cfg.seed);
  Rng shuffle_rng(cfg.seed, 0x5A1);
  const rollout::Index per_group = rollout::kLanes / cfg.minibatches;

  const std::int64_t interval =
      std::max<std::int64_t>(1, static_cast<std::int64_t>(std::llround(cfg.validation_every * cfg.budget_steps)));
  std::int64_t next_eval = 0;
  std::int64_t t = 0;
  auto validate = [&] {
    const EvalMetrics m = evaluate_policy(policy, cfg.task, cfg.validation_episodes, cfg.seed);
    rec.validation.push_back({t, m.mean_reward, m.success_rate, m.mean_length});
    while (next_eval <= t) next_eval += interval;
  };

  try {
    validate();
    while (t < cfg.budget_steps) {
      const double eps = learn::clip_schedule(t, cfg.budget_steps, cfg.clip_eps);
      const learn::StagePlan plan = learn::stage_plan(cfg.method, t, cfg.budget_steps, eps);
      if (plan.rollouts) {
        rollout::RolloutBuffer buf =
            collector.collect(policy, plan.teacher_forcing, expert.get(), plan.expert_labels);
        rollout::compute_advantages(buf);
        for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
          for (const auto& lanes : rollout::lane_partition(buf.lanes, cfg.minibatches, shuffle_rng)) {
            rollout::Minibatch mb = rollout::make_minibatch(buf, lanes);
            learn::normalize_advantages(mb.targets.advantages);
            const auto r = optimise_minibatch(policy, adam, mb, plan.rollout_loss, cfg.method.lr, cfg.max_grad_norm);
            if (cfg.on_update) cfg.on_update(mb, r, false);
            if (plan.demo_step) {
              const rollout::Minibatch dmb = sampler->sample(per_group);
              const auto d = optimise_minibatch(policy, adam, dmb, plan.demo_loss, cfg.method.lr, cfg.max_grad_norm);
              if (cfg.on_update) cfg.on_update(dmb, d, true);
            }
          }
        }
        t += buf.size();
      } else {
        for (int step = 0; step < cfg.epochs * cfg.minibatches; ++step) {
          const rollout::Minibatch dmb = sampler->sample(per_group);
          const auto d = optimise_minibatch(policy, adam, dmb, plan.demo_loss, cfg.method.lr, cfg.max_grad_norm);
          if (cfg.on_update) cfg.on_update(dmb, d, true);
        }
        t += rollout::kLanes * rollout::kSegmentLength;
      }
      if (t >= next_eval || t >= cfg.budget_steps) validate();
    }
  } catch (const NonFinite& e) {
    rec.failed = true;
    rec.failure = e.what();
  }
  rec.train_steps = t;

  if (cfg.checkpoint && !rec.failed) {
    if (cfg.checkpoint->has_parent_path()) std::filesystem::create_directories(cfg.checkpoint->parent_path());
    diff::save_checkpoint(*cfg.checkpoint, policy.params(), checkpoint_metadata(cfg));
    rec.checkpoint = cfg.checkpoint->string();
  }
  rec.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace advlab::harness
