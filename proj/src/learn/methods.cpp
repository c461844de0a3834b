#include "advlab/learn/methods.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace advlab::learn {
namespace {

std::string fold(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.compare(i, 2, "->") == 0) {
      out += "_then_";
      ++i;
    } else if (s.compare(i, 3, "\xE2\x86\x92") == 0) {  // the arrow in UTF-8
      out += "_then_";
      i += 2;
    } else if (s[i] == '+') {
      out += "_plus_";
    } else if (s[i] == '-' || s[i] == ' ') {
      out += '_';
    } else {
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(s[i])));
    }
  }
  return out;
}

StagePlan imitation(std::string_view name, double tf) {
  StagePlan p;
  p.name = name;
  p.teacher_forcing = tf;
  p.expert_labels = true;
  p.rollout_loss.main = MainTerm::Imitation;
  p.rollout_loss.value_term = false;
  return p;
}

StagePlan ppo(double eps) {
  StagePlan p;
  p.name = "PPO";
  p.rollout_loss.main = MainTerm::Ppo;
  p.rollout_loss.clip_eps = eps;
  return p;
}

StagePlan advisor(const MethodConfig& c, double eps) {
  StagePlan p;
  p.name = "ADV";
  p.expert_labels = true;
  p.rollout_loss.main = MainTerm::Advisor;
  p.rollout_loss.advisor = c.advisor();
  p.rollout_loss.aux_term = true;
  p.rollout_loss.clip_eps = eps;
  return p;
}

StagePlan dagger(std::int64_t t, std::int64_t boundary) {
  const double tf = boundary > 0 ? std::max(0.0, 1.0 - static_cast<double>(t) / static_cast<double>(boundary)) : 0.0;
  return imitation("DAgger", tf);
}

}  // namespace

const std::array<MethodInfo, 14>& method_registry() {
  static const std::array<MethodInfo, 14> registry{{
      {MethodId::Bc, "bc", "BC", false, false, false, true},
      {MethodId::Dagger, "dagger", "DAgger", true, false, false, true},
      {MethodId::BcTf1, "bc_tf1", "BCtf1", false, false, false, true},
      {MethodId::Ppo, "ppo", "PPO", false, false, false, false},
      {MethodId::BcThenPpo, "bc_then_ppo", "BC\xE2\x86\x92PPO", true, false, false, true},
      {MethodId::DaggerThenPpo, "dagger_then_ppo", "DAgger\xE2\x86\x92PPO", true, false, false, true},
      {MethodId::BcTf1ThenPpo, "bc_tf1_then_ppo", "BCtf1\xE2\x86\x92PPO", true, false, false, true},
      {MethodId::BcPlusPpo, "bc_plus_ppo", "BC+PPO-static", false, false, false, true},
      {MethodId::BcDemo, "bc_demo", "BCdemo", false, false, true, false},
      {MethodId::BcDemoPlusPpo, "bc_demo_plus_ppo", "BCdemo+PPO", false, false, true, false},
      {MethodId::Adv, "adv", "ADV", false, true, false, true},
      {MethodId::DaggerThenAdv, "dagger_then_adv", "DAgger\xE2\x86\x92" "ADV", true, true, false, true},
      {MethodId::BcTf1ThenAdv, "bc_tf1_then_adv", "BCtf1\xE2\x86\x92" "ADV", true, true, false, true},
      {MethodId::AdvDemoPlusPpo, "adv_demo_plus_ppo", "ADVdemo+PPO", false, true, true, false},
  }};
  return registry;
}

const MethodInfo& method_info(MethodId id) { return method_registry()[static_cast<std::size_t>(id)]; }

MethodId parse_method(std::string_view name) {
  const std::string key = fold(name);
  for (const auto& m : method_registry()) {
    if (key == m.key || key == fold(m.display)) return m.id;
  }
  if (key == "bc_plus_ppo_static") return MethodId::BcPlusPpo;
  throw std::invalid_argument("unknown method '" + std::string(name) + "'; valid ids: " + valid_method_list());
}

std::string valid_method_list() {
  std::string s;
  for (const auto& m : method_registry()) {
    if (!s.empty()) s += ", ";
    s += m.key;
  }
  return s;
}

void MethodConfig::validate() const {
  const auto& info = method_info(method);
  const std::string who(info.key);
  if (!(lr > 0.0)) throw std::invalid_argument(who + ": lr must be positive");
  if (info.searches_split != stage_split.has_value()) {
    throw std::invalid_argument(who + (info.searches_split ? ": stage_split required" : ": stage_split not used"));
  }
  if (stage_split && (*stage_split < 0.0 || *stage_split > 1.0)) throw std::invalid_argument(who + ": stage_split outside [0,1]");
  if (info.searches_alpha != alpha.has_value()) {
    throw std::invalid_argument(who + (info.searches_alpha ? ": alpha required" : ": alpha not used"));
  }
  if (alpha && *alpha < 0.0) throw std::invalid_argument(who + ": alpha must be non-negative");
  if (!(beta > 0.0)) throw std::invalid_argument(who + ": beta must be positive");
  if (static_mix_weight < 0.0 || static_mix_weight > 1.0) throw std::invalid_argument(who + ": static weight outside [0,1]");
}

double clip_schedule(std::int64_t t, std::int64_t total, double initial) {
  if (total <= 0) return initial;
  return initial * std::max(0.0, 1.0 - static_cast<double>(t) / static_cast<double>(total));
}

StagePlan stage_plan(const MethodConfig& c, std::int64_t t, std::int64_t total, double eps) {
  const std::int64_t boundary =
      c.stage_split ? static_cast<std::int64_t>(*c.stage_split * static_cast<double>(total)) : 0;
  const bool first = t < boundary;
  switch (c.method) {
    case MethodId::Bc: return imitation("BC", 0.0);
    case MethodId::Dagger: return first ? dagger(t, boundary) : imitation("BC", 0.0);
    case MethodId::BcTf1: return imitation("BCtf1", 1.0);
    case MethodId::Ppo: return ppo(eps);
    case MethodId::BcThenPpo: return first ? imitation("BC", 0.0) : ppo(eps);
    case MethodId::DaggerThenPpo: return first ? dagger(t, boundary) : ppo(eps);
    case MethodId::BcTf1ThenPpo: return first ? imitation("BCtf1", 1.0) : ppo(eps);
    case MethodId::BcPlusPpo: {
      StagePlan p = ppo(eps);
      p.name = "BC+PPO";
      p.expert_labels = true;
      p.rollout_loss.main = MainTerm::StaticMix;
      p.rollout_loss.static_weight = c.static_mix_weight;
      return p;
    }
    case MethodId::BcDemo: {
      StagePlan p;
      p.name = "BCdemo";
      p.rollouts = false;
      p.demo_step = true;
      p.demo_loss.main = MainTerm::Imitation;
      p.demo_loss.value_term = false;
      return p;
    }
    case MethodId::BcDemoPlusPpo: {
      StagePlan p = ppo(eps);
      p.name = "BCdemo+PPO";
      p.demo_step = true;
      p.demo_loss.main = MainTerm::Imitation;
      p.demo_loss.value_term = false;
      return p;
    }
    case MethodId::Adv: return advisor(c, eps);
    case MethodId::DaggerThenAdv: return first ? dagger(t, boundary) : advisor(c, eps);
    case MethodId::BcTf1ThenAdv: return first ? imitation("BCtf1", 1.0) : advisor(c, eps);
    case MethodId::AdvDemoPlusPpo: {
      StagePlan p = ppo(eps);
      p.name = "ADVdemo+PPO";
      p.demo_step = true;
      p.demo_loss.main = MainTerm::Advisor;
      p.demo_loss.advisor = c.advisor();
      p.demo_loss.ppo_term = false;
      p.demo_loss.value_term = false;
      p.demo_loss.aux_term = true;
      return p;
    }
  }
  throw std::logic_error("stage_plan: unknown method");
}

}  // namespace advlab::learn
