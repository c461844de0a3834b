#include "advlab/experts/demonstrations.hpp"

#include "advlab/envs/env.hpp"
#include "advlab/harness/seeds.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace advlab::experts {
namespace {

constexpr char kMagic[8] = {'A', 'D', 'V', 'L', 'D', 'E', 'M', 'O'};

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("demonstration file truncated");
  return v;
}

void put_string(std::ostream& out, const std::string& s) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_string(std::istream& in) {
  const auto n = get<std::uint32_t>(in);
  if (n > (1u << 20)) throw std::runtime_error("demonstration file: implausible string length");
  std::string s(n, '\0');
  in.read(s.data(), n);
  if (!in) throw std::runtime_error("demonstration file truncated");
  return s;
}

}  // namespace

std::size_t Demonstration::num_steps() const {
  std::size_t n = 0;
  for (const auto& e : episodes) n += e.size();
  return n;
}

Demonstration record_demonstrations(const envs::TaskSpec& spec, const Expert& expert, int num_episodes,
                                    std::uint64_t seed, std::uint64_t experiment_seed) {
  if (num_episodes < 0) throw std::invalid_argument("record_demonstrations: negative episode count");
  Demonstration demo;
  demo.task = spec.id;
  demo.expert_kind = expert.kind();
  demo.seed = seed;
  auto env = envs::make_env(spec, experiment_seed);
  Rng seeds(seed, 0xDE305);
  Rng actions(seed, 0xAC7);
  for (int ep = 0; ep < num_episodes; ++ep) {
    env->reset(harness::training_episode_seed(seeds));
    std::vector<DemoStep> steps;
    while (!env->done()) {
      DemoStep s;
      s.observation = env->observe();
      s.expert_action = sample_action(expert.distribution(*env), actions);
      s.executed_action = s.expert_action;
      const auto r = env->step(s.executed_action);
      s.reward = r.reward;
      s.done = r.done;
      steps.push_back(std::move(s));
    }
    demo.episodes.push_back(std::move(steps));
  }
  return demo;
}

void write_demonstrations(std::ostream& out, const Demonstration& demo) {
  out.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, kDemoVersion);
  put_string(out, demo.task);
  put_string(out, demo.expert_kind);
  put<std::uint64_t>(out, demo.seed);
  put<std::uint64_t>(out, demo.episodes.size());
  for (const auto& episode : demo.episodes) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(episode.size()));
    for (const auto& s : episode) {
      const auto& o = s.observation;
      put<std::uint8_t>(out, static_cast<std::uint8_t>(o.encoding));
      put<std::uint32_t>(out, static_cast<std::uint32_t>(o.tokens.size()));
      out.write(reinterpret_cast<const char*>(o.tokens.data()),
                static_cast<std::streamsize>(o.tokens.size() * sizeof(std::int32_t)));
      put<std::uint32_t>(out, o.legal);
      put<std::int32_t>(out, o.last_action.value_or(-1));
      put<std::int32_t>(out, s.expert_action);
      put<std::int32_t>(out, s.executed_action);
      put<double>(out, s.reward);
      put<std::uint8_t>(out, s.done ? 1 : 0);
    }
  }
  if (!out) throw std::runtime_error("failed writing demonstrations");
}

Demonstration read_demonstrations(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0) throw std::runtime_error("not a demonstration file");
  const auto version = get<std::uint32_t>(in);
  if (version != kDemoVersion) throw std::runtime_error("unsupported demonstration file version " + std::to_string(version));
  Demonstration demo;
  demo.task = get_string(in);
  demo.expert_kind = get_string(in);
  demo.seed = get<std::uint64_t>(in);
  const auto count = get<std::uint64_t>(in);
  demo.episodes.reserve(count);
  for (std::uint64_t e = 0; e < count; ++e) {
    const auto n = get<std::uint32_t>(in);
    std::vector<DemoStep> steps(n);
    for (auto& s : steps) {
      auto& o = s.observation;
      o.encoding = static_cast<envs::Encoding>(get<std::uint8_t>(in));
      const auto nt = get<std::uint32_t>(in);
      o.tokens.resize(nt);
      in.read(reinterpret_cast<char*>(o.tokens.data()), static_cast<std::streamsize>(nt * sizeof(std::int32_t)));
      o.legal = get<std::uint32_t>(in);
      const auto last = get<std::int32_t>(in);
      if (last >= 0) o.last_action = last;
      s.expert_action = get<std::int32_t>(in);
      s.executed_action = get<std::int32_t>(in);
      s.reward = get<double>(in);
      s.done = get<std::uint8_t>(in) != 0;
    }
    if (!steps.empty() && !steps.back().done) throw std::runtime_error("demonstration episode not terminated");
    demo.episodes.push_back(std::move(steps));
  }
  return demo;
}

void save_demonstrations(const std::filesystem::path& path, const Demonstration& demo) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_demonstrations(out, demo);
}

Demonstration load_demonstrations(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_demonstrations(in);
}

}  // namespace advlab::experts
