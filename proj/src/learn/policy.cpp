#include "advlab/learn/policy.hpp"

#include "advlab/diff/ops.hpp"
#include "advlab/envs/crossing.hpp"
#include "advlab/envs/lighthouse.hpp"

#include <cmath>
#include <stdexcept>

namespace advlab::learn {
namespace {

std::vector<std::int32_t> flatten_tokens(const NetInput& input, std::size_t width) {
  if (static_cast<Index>(input.observations.size()) != input.size()) {
    throw std::invalid_argument("NetInput: observation count does not match steps x lanes");
  }
  std::vector<std::int32_t> tokens;
  tokens.reserve(input.observations.size() * width);
  for (const auto& o : input.observations) {
    if (o.tokens.size() != width) throw std::invalid_argument("NetInput: unexpected observation width");
    tokens.insert(tokens.end(), o.tokens.begin(), o.tokens.end());
  }
  return tokens;
}

void fill_heads(NetOutput& out, const Matrix& main_logits, const Matrix& aux_logits, const NetInput& input) {
  const auto masks = input.masks();
  out.main_probs = diff::masked_softmax_columns(main_logits, masks);
  out.aux_probs = diff::masked_softmax_columns(aux_logits, masks);
}

}  // namespace

std::vector<diff::ActionMask> NetInput::masks() const {
  std::vector<diff::ActionMask> m;
  m.reserve(observations.size());
  for (const auto& o : observations) m.push_back(o.legal);
  return m;
}

LighthouseLinearNet::LighthouseLinearNet(Index num_actions, std::uint64_t seed) : PolicyNet(num_actions) {
  Rng rng(seed, 0x11A);
  const double bound = 1.0 / std::sqrt(static_cast<double>(envs::kLighthouse2DEncodingSize));
  main_ = std::make_unique<diff::Embedding>(params_, "main", envs::kLighthouse2DEncodingSize, num_actions, rng, bound, false);
  aux_ = std::make_unique<diff::Embedding>(params_, "aux", envs::kLighthouse2DEncodingSize, num_actions, rng, bound, false);
  critic_ = std::make_unique<diff::Embedding>(params_, "critic", envs::kLighthouse2DEncodingSize, 1, rng, bound, false);
  main_bias_ = &params_.add("main.bias", Matrix::Zero(num_actions, 1));
  aux_bias_ = &params_.add("aux.bias", Matrix::Zero(num_actions, 1));
  critic_bias_ = &params_.add("critic.bias", Matrix::Zero(1, 1));
}

NetOutput LighthouseLinearNet::forward(const NetInput& input, bool keep_cache) const {
  NetOutput out;
  std::vector<std::int32_t> tokens = flatten_tokens(input, 1);
  Matrix main = main_->forward(tokens);
  main.colwise() += main_bias_->value.col(0);
  Matrix aux = aux_->forward(tokens);
  aux.colwise() += aux_bias_->value.col(0);
  Matrix v = critic_->forward(tokens);
  v.array() += critic_bias_->value(0, 0);
  fill_heads(out, main, aux, input);
  out.values = v.row(0);
  if (keep_cache) out.tokens = std::move(tokens);
  return out;
}

void LighthouseLinearNet::backward(const NetInput&, const NetOutput& output, const Matrix& d_main_logits,
                                   const Matrix& d_aux_logits, const RowVector& d_values) {
  main_->backward(output.tokens, d_main_logits);
  main_bias_->grad.col(0) += d_main_logits.rowwise().sum();
  aux_->backward(output.tokens, d_aux_logits);
  aux_bias_->grad.col(0) += d_aux_logits.rowwise().sum();
  critic_->backward(output.tokens, Matrix(d_values));
  critic_bias_->grad(0, 0) += d_values.sum();
}

RecurrentNet::RecurrentNet(Architecture arch, Index num_actions, std::uint64_t seed, Index hidden)
    : PolicyNet(num_actions), arch_(arch), hidden_(hidden) {
  Rng rng(seed, 0x2EC);
  Index in = 0;
  if (arch == Architecture::DoorsRecurrent) {
    phase_ = std::make_unique<diff::Embedding>(params_, "encoder.phase", 4, kDoorsEmbedding, rng);
    in = kDoorsEmbedding;
  } else if (arch == Architecture::GridRecurrent) {
    type_ = std::make_unique<diff::Embedding>(params_, "encoder.type", kGridVocab, kGridEmbedding, rng);
    color_ = std::make_unique<diff::Embedding>(params_, "encoder.color", kGridVocab, kGridEmbedding, rng);
    state_ = std::make_unique<diff::Embedding>(params_, "encoder.state", kGridVocab, kGridEmbedding, rng);
    in = envs::kViewSize * envs::kViewSize * 3 * kGridEmbedding;
  } else {
    throw std::invalid_argument("RecurrentNet: not a recurrent architecture");
  }
  lstm_ = std::make_unique<diff::Lstm>(params_, "lstm", in, hidden, rng);
  main_ = std::make_unique<diff::Linear>(params_, "main", hidden, num_actions, rng);
  aux_ = std::make_unique<diff::Linear>(params_, "aux", hidden, num_actions, rng);
  critic_ = std::make_unique<diff::Linear>(params_, "critic", hidden, 1, rng);
}

Matrix RecurrentNet::encode(const std::vector<std::int32_t>& tokens, Index n) const {
  if (arch_ == Architecture::DoorsRecurrent) return phase_->forward(tokens);
  constexpr Index cells = envs::kViewSize * envs::kViewSize;
  constexpr Index width = cells * 3;
  Matrix out(width * kGridEmbedding, n);
  const diff::Embedding* tables[3] = {type_.get(), color_.get(), state_.get()};
  for (Index cell = 0; cell < cells; ++cell)
    for (Index ch = 0; ch < 3; ++ch)
      tables[ch]->forward_into(tokens, out, (cell * 3 + ch) * kGridEmbedding, width, cell * 3 + ch);
  return out;
}

void RecurrentNet::encode_backward(const std::vector<std::int32_t>& tokens, const Matrix& d_encoded) {
  if (arch_ == Architecture::DoorsRecurrent) {
    phase_->backward(tokens, d_encoded);
    return;
  }
  constexpr Index cells = envs::kViewSize * envs::kViewSize;
  constexpr Index width = cells * 3;
  diff::Embedding* tables[3] = {type_.get(), color_.get(), state_.get()};
  for (Index cell = 0; cell < cells; ++cell)
    for (Index ch = 0; ch < 3; ++ch)
      tables[ch]->backward_from(tokens, d_encoded, (cell * 3 + ch) * kGridEmbedding, width, cell * 3 + ch);
}

NetOutput RecurrentNet::forward(const NetInput& input, bool keep_cache) const {
  NetOutput out;
  const std::size_t width = arch_ == Architecture::DoorsRecurrent ? 1 : envs::kViewSize * envs::kViewSize * 3;
  std::vector<std::int32_t> tokens = flatten_tokens(input, width);
  Matrix encoded = encode(tokens, input.size());
  out.h = input.h0.size() ? input.h0 : initial_state(input.lanes);
  out.c = input.c0.size() ? input.c0 : initial_state(input.lanes);
  Matrix features = lstm_->forward(encoded, input.steps, input.lanes, input.resets, out.h, out.c,
                                   keep_cache ? &out.trace : nullptr);
  fill_heads(out, main_->forward(features), aux_->forward(features), input);
  out.values = critic_->forward(features).row(0);
  if (keep_cache) {
    out.tokens = std::move(tokens);
    out.features = std::move(features);
  }
  return out;
}

void RecurrentNet::backward(const NetInput& input, const NetOutput& output, const Matrix& d_main_logits,
                            const Matrix& d_aux_logits, const RowVector& d_values) {
  Matrix d_features = main_->backward(output.features, d_main_logits);
  d_features += aux_->backward(output.features, d_aux_logits);
  d_features += critic_->backward(output.features, Matrix(d_values));
  const Matrix d_encoded = lstm_->backward(output.trace, input.resets, d_features);
  encode_backward(output.tokens, d_encoded);
}

Architecture architecture_for(const envs::TaskSpec& spec) {
  switch (spec.family) {
    case envs::Family::PoisonedDoors: return Architecture::DoorsRecurrent;
    case envs::Family::Lighthouse2D: return Architecture::LighthouseLinear;
    case envs::Family::WallCrossing:
    case envs::Family::LavaCrossing: return Architecture::GridRecurrent;
    case envs::Family::Lighthouse1D: break;
  }
  throw std::invalid_argument("no learner architecture for task " + spec.id);
}

std::unique_ptr<PolicyNet> make_policy(const envs::TaskSpec& spec, std::uint64_t seed) {
  const Architecture arch = architecture_for(spec);
  if (arch == Architecture::LighthouseLinear) return std::make_unique<LighthouseLinearNet>(spec.num_actions(), seed);
  return std::make_unique<RecurrentNet>(arch, spec.num_actions(), seed);
}

int greedy_action(const Matrix& probs, Index column) {
  Index best = 0;
  probs.col(column).maxCoeff(&best);
  return static_cast<int>(best);
}

}  // namespace advlab::learn
