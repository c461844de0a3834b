#include "advlab/harness/records.hpp"

#include "advlab/harness/expected_max.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace advlab::harness {
namespace {

using nlohmann::json;

json hps_json(const learn::MethodConfig& c, std::uint64_t hp_seed) {
  json j;
  j["lr"] = c.lr;
  j["stage_split"] = c.stage_split ? json(*c.stage_split) : json(nullptr);
  j["alpha"] = c.alpha ? json(*c.alpha) : json(nullptr);
  j["beta"] = std::isinf(c.beta) ? json("inf") : json(c.beta);
  j["static_mix_weight"] = c.static_mix_weight;
  j["hp_seed"] = hp_seed;
  return j;
}

}  // namespace

double RunRecord::best_validation_reward() const {
  if (validation.empty()) throw std::logic_error("run record has no validation points");
  double best = validation.front().reward;
  for (const auto& v : validation) best = std::max(best, v.reward);
  return best;
}

bool RunRecord::same_trace(const RunRecord& other) const {
  return train_steps == other.train_steps && validation == other.validation && failed == other.failed;
}

std::string record_to_jsonl(const RunRecord& r) {
  std::ostringstream out;
  json head;
  head["kind"] = "run";
  head["schema"] = kRecordSchema;
  head["task"] = r.task.id;
  head["task_spec"] = json::parse(envs::task_to_json(r.task));
  head["method"] = std::string(learn::method_info(r.hps.method).key);
  head["hps"] = hps_json(r.hps, r.hp_seed);
  head["seed"] = r.seed;
  head["budget_steps"] = r.budget_steps;
  out << head.dump() << '\n';
  for (const auto& v : r.validation) {
    json row;
    row["step"] = v.step;
    row["reward"] = v.reward;
    row["success"] = v.success;
    row["ep_len"] = v.episode_length;
    out << row.dump() << '\n';
  }
  json foot;
  foot["kind"] = "summary";
  foot["train_steps"] = r.train_steps;
  foot["checkpoint"] = r.checkpoint;
  foot["wall_clock"] = r.wall_clock_seconds;
  foot["failed"] = r.failed;
  foot["error"] = r.failure;
  out << foot.dump() << '\n';
  return out.str();
}

RunRecord record_from_jsonl(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  RunRecord r;
  bool have_head = false;
  bool have_foot = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    if (!have_head) {
      if (j.value("kind", "") != "run") throw std::runtime_error("run record: missing header");
      if (j.at("schema").get<int>() != kRecordSchema) throw std::runtime_error("run record: unsupported schema");
      r.task = envs::task_from_json(j.at("task_spec").dump());
      const auto& h = j.at("hps");
      r.hps.method = learn::parse_method(j.at("method").get<std::string>());
      r.hps.lr = h.at("lr").get<double>();
      if (!h.at("stage_split").is_null()) r.hps.stage_split = h.at("stage_split").get<double>();
      if (!h.at("alpha").is_null()) r.hps.alpha = h.at("alpha").get<double>();
      r.hps.beta = h.at("beta").is_string() ? std::numeric_limits<double>::infinity() : h.at("beta").get<double>();
      r.hps.static_mix_weight = h.at("static_mix_weight").get<double>();
      r.hp_seed = h.at("hp_seed").get<std::uint64_t>();
      r.seed = j.at("seed").get<std::uint64_t>();
      r.budget_steps = j.at("budget_steps").get<std::int64_t>();
      have_head = true;
    } else if (j.contains("kind") && j["kind"] == "summary") {
      r.train_steps = j.at("train_steps").get<std::int64_t>();
      r.checkpoint = j.at("checkpoint").get<std::string>();
      r.wall_clock_seconds = j.at("wall_clock").get<double>();
      r.failed = j.at("failed").get<bool>();
      r.failure = j.at("error").get<std::string>();
      have_foot = true;
    } else {
      ValidationPoint v;
      v.step = j.at("step").get<std::int64_t>();
      v.reward = j.at("reward").get<double>();
      v.success = j.at("success").get<double>();
      v.episode_length = j.at("ep_len").get<double>();
      r.validation.push_back(v);
    }
  }
  if (!have_head || !have_foot) throw std::runtime_error("run record: incomplete file");
  return r;
}

void save_record(const std::filesystem::path& path, const RunRecord& record) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << record_to_jsonl(record);
}

RunRecord load_record(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return record_from_jsonl(ss.str());
}

SweepReport build_report(const std::vector<RunRecord>& records, int n_resamples, std::uint64_t seed) {
  if (records.empty()) throw std::invalid_argument("build_report: no records");
  SweepReport report;
  report.task = records.front().task.id;
  std::map<learn::MethodId, std::vector<const RunRecord*>> by_method;
  std::map<std::tuple<int, int, learn::MethodId>, LighthouseCell> cells;
  for (const auto& r : records) {
    if (r.task.id != report.task) throw std::invalid_argument("build_report: records span several tasks");
    if (r.validation.empty()) continue;
    by_method[r.hps.method].push_back(&r);
    if (r.task.is_lighthouse()) {
      auto& cell = cells[{r.task.view_radius, r.task.expert_radius, r.hps.method}];
      cell.half_width = r.task.grid_size;
      cell.view_radius = r.task.view_radius;
      cell.expert_radius = r.task.expert_radius;
      cell.method = learn::method_info(r.hps.method).key;
      cell.episode_lengths.push_back(r.validation.back().episode_length);
    }
  }
  for (const auto& [method, runs] : by_method) {
    MethodSummary m;
    m.method = learn::method_info(method).key;
    m.display = learn::method_info(method).display;
    for (const auto* r : runs) m.best_values.push_back(r->best_validation_reward());
    const int top = std::min<int>(kMaxBudget, static_cast<int>(m.best_values.size()));
    for (int k = 1; k <= top; ++k) {
      CurvePoint p;
      p.k = k;
      p.value = expected_max_ustat(m.best_values, k);
      const auto [lo, hi] = bootstrap_band(m.best_values, k, n_resamples, {0.25, 0.75}, seed + static_cast<std::uint64_t>(k));
      p.lo = std::min(lo, p.value);
      p.hi = std::max(hi, p.value);
      m.curve.push_back(p);
    }
    report.methods.push_back(std::move(m));
  }
  for (auto& [key, cell] : cells) report.lighthouse.push_back(std::move(cell));
  return report;
}

std::string report_to_json(const SweepReport& report) {
  json doc;
  doc["schema"] = kRecordSchema;
  doc["task"] = report.task;
  doc["methods"] = json::array();
  for (const auto& m : report.methods) {
    json jm;
    jm["method"] = m.method;
    jm["display"] = m.display;
    jm["n"] = m.best_values.size();
    jm["best_values"] = m.best_values;
    jm["curve"] = json::array();
    for (const auto& p : m.curve) jm["curve"].push_back({{"k", p.k}, {"value", p.value}, {"lo", p.lo}, {"hi", p.hi}});
    doc["methods"].push_back(std::move(jm));
  }
  if (!report.lighthouse.empty()) {
    doc["lighthouse"] = json::array();
    for (const auto& c : report.lighthouse) {
      doc["lighthouse"].push_back({{"N", c.half_width},
                                   {"i", c.view_radius},
                                   {"j", c.expert_radius},
                                   {"method", c.method},
                                   {"episode_lengths", c.episode_lengths}});
    }
  }
  return doc.dump(2);
}

std::filesystem::path output_root(const std::filesystem::path& fallback) {
  if (const char* env = std::getenv("ADVLAB_OUT"); env != nullptr && *env != '\0') return env;
  return fallback;
}

}  // namespace advlab::harness
