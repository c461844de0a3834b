#pragma once

#include "advlab/diff/layers.hpp"
#include "advlab/diff/param_store.hpp"
#include "advlab/envs/observation.hpp"
#include "advlab/envs/task.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace advlab::learn {

using diff::Index;
using diff::Matrix;
using diff::RowVector;
using diff::Vector;
using envs::Observation;

/// Network input for `steps` x `lanes` observations stored time-major
/// (column t*lanes + b). resets[i] != 0 zeroes the lane's recurrent state
/// before column i is consumed.
struct NetInput {
  Index steps = 1;
  Index lanes = 1;
  std::vector<Observation> observations;
  std::vector<std::uint8_t> resets;
  Matrix h0;  // hidden x lanes, empty for feed-forward nets
  Matrix c0;

  Index size() const { return steps * lanes; }
  std::vector<diff::ActionMask> masks() const;
};

/// Forward results plus whatever the backward pass needs.
struct NetOutput {
  Matrix main_probs;  // actions x N
  Matrix aux_probs;
  RowVector values;
  Matrix h;  // final recurrent state
  Matrix c;

  // caches
  std::vector<std::int32_t> tokens;
  Matrix encoded;
  Matrix features;
  diff::LstmTrace trace;
};

enum class Architecture { LighthouseLinear, DoorsRecurrent, GridRecurrent };

/// Main actor, auxiliary actor and critic on a shared representation.
class PolicyNet {
 public:
  virtual ~PolicyNet() = default;

  virtual Architecture architecture() const = 0;
  virtual NetOutput forward(const NetInput& input, bool keep_cache) const = 0;
  /// Accumulates parameter gradients from dL/dlogits of both actors and
  /// dL/dvalue.
  virtual void backward(const NetInput& input, const NetOutput& output, const Matrix& d_main_logits,
                        const Matrix& d_aux_logits, const RowVector& d_values) = 0;
  virtual Index hidden_size() const { return 0; }
  bool recurrent() const { return hidden_size() > 0; }

  Index num_actions() const { return num_actions_; }
  diff::ParamStore& params() { return params_; }
  const diff::ParamStore& params() const { return params_; }
  /// Zero recurrent state for `lanes` lanes (0 x lanes if feed-forward).
  Matrix initial_state(Index lanes) const { return Matrix::Zero(hidden_size(), lanes); }

 protected:
  explicit PolicyNet(Index num_actions) : num_actions_(num_actions) {}

  Index num_actions_;
  diff::ParamStore params_;
};

/// 2D lighthouse: every head is linear in the 6400-wide one-hot observation.
class LighthouseLinearNet final : public PolicyNet {
 public:
  LighthouseLinearNet(Index num_actions, std::uint64_t seed);
  Architecture architecture() const override { return Architecture::LighthouseLinear; }
  NetOutput forward(const NetInput& input, bool keep_cache) const override;
  void backward(const NetInput& input, const NetOutput& output, const Matrix& d_main_logits,
                const Matrix& d_aux_logits, const RowVector& d_values) override;

 private:
  std::unique_ptr<diff::Embedding> main_, aux_, critic_;
  diff::Tensor *main_bias_, *aux_bias_, *critic_bias_;
};

/// Embedding encoder -> LSTM(hidden) -> linear heads. The doors encoder embeds
/// the single phase token; the grid encoder embeds type/color/state of each of
/// the 7x7 cells with three tables and concatenates them.
class RecurrentNet final : public PolicyNet {
 public:
  RecurrentNet(Architecture arch, Index num_actions, std::uint64_t seed, Index hidden = 128);
  Architecture architecture() const override { return arch_; }
  NetOutput forward(const NetInput& input, bool keep_cache) const override;
  void backward(const NetInput& input, const NetOutput& output, const Matrix& d_main_logits,
                const Matrix& d_aux_logits, const RowVector& d_values) override;
  Index hidden_size() const override { return hidden_; }

  static constexpr Index kDoorsEmbedding = 128;
  static constexpr Index kGridVocab = 8;
  static constexpr Index kGridEmbedding = 8;

 private:
  Matrix encode(const std::vector<std::int32_t>& tokens, Index n) const;
  void encode_backward(const std::vector<std::int32_t>& tokens, const Matrix& d_encoded);

  Architecture arch_;
  Index hidden_;
  std::unique_ptr<diff::Embedding> phase_;
  std::unique_ptr<diff::Embedding> type_, color_, state_;
  std::unique_ptr<diff::Lstm> lstm_;
  std::unique_ptr<diff::Linear> main_, aux_, critic_;
};

/// The architecture a task uses.
Architecture architecture_for(const envs::TaskSpec& spec);
std::unique_ptr<PolicyNet> make_policy(const envs::TaskSpec& spec, std::uint64_t seed);

/// Column-wise argmax restricted to legal actions.
int greedy_action(const Matrix& probs, Index column);

}  // namespace advlab::learn
