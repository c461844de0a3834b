#pragma once

#include "advlab/envs/task.hpp"
#include "advlab/learn/methods.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace advlab::harness {

inline constexpr int kRecordSchema = 1;

struct ValidationPoint {
  std::int64_t step = 0;
  double reward = 0.0;
  double success = 0.0;
  double episode_length = 0.0;

  friend bool operator==(const ValidationPoint&, const ValidationPoint&) = default;
};

struct RunRecord {
  envs::TaskSpec task;
  learn::MethodConfig hps;
  std::uint64_t hp_seed = 0;
  std::uint64_t seed = 0;
  std::int64_t budget_steps = 0;
  std::int64_t train_steps = 0;  // steps actually taken
  std::vector<ValidationPoint> validation;
  std::string checkpoint;
  double wall_clock_seconds = 0.0;
  bool failed = false;
  std::string failure;

  /// Maximum validation reward over the run.
  double best_validation_reward() const;
  /// The metric trace that must reproduce bit-exactly (no wall clock).
  bool same_trace(const RunRecord& other) const;
};

/// JSON-lines: a header object, one object per validation point, a footer.
std::string record_to_jsonl(const RunRecord& record);
RunRecord record_from_jsonl(const std::string& text);
void save_record(const std::filesystem::path& path, const RunRecord& record);
RunRecord load_record(const std::filesystem::path& path);

/// Per (task, method): best values, expected-max curve and bootstrap band.
struct CurvePoint {
  int k = 0;
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

struct MethodSummary {
  std::string method;
  std::string display;
  std::vector<double> best_values;
  std::vector<CurvePoint> curve;
};

struct LighthouseCell {
  int half_width = 0;
  int view_radius = 0;
  int expert_radius = 0;
  std::string method;
  std::vector<double> episode_lengths;  // final validation length per run
};

struct SweepReport {
  std::string task;
  std::vector<MethodSummary> methods;
  std::vector<LighthouseCell> lighthouse;
};

inline constexpr int kMaxBudget = 45;

/// Groups runs of one task by method. Bands are the bootstrap quartiles,
/// widened where needed so that they contain the point estimate.
SweepReport build_report(const std::vector<RunRecord>& records, int n_resamples = 1000, std::uint64_t seed = 0);
std::string report_to_json(const SweepReport& report);

/// Output root: $ADVLAB_OUT if set, else the fallback.
std::filesystem::path output_root(const std::filesystem::path& fallback);

}  // namespace advlab::harness
