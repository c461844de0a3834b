#include "advlab/learn/losses.hpp"

#include "advlab/diff/ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace advlab::learn {

double advisor_weight_from_kl(double kl, const AdvisorParams& p) {
  if (kl > p.beta) return 0.0;
  return std::exp(-p.alpha * kl);
}

double advisor_weight(const Vector& expert, const Vector& aux, const AdvisorParams& p) {
  return advisor_weight_from_kl(diff::kl_divergence(expert, aux), p);
}

double bc_loss(const Matrix& expert, const Matrix& predicted) {
  if (expert.rows() != predicted.rows() || expert.cols() != predicted.cols() || expert.cols() == 0) {
    throw std::invalid_argument("bc_loss: shape mismatch");
  }
  double total = 0;
  for (Index n = 0; n < expert.cols(); ++n) total += diff::cross_entropy(expert.col(n), predicted.col(n));
  return total / static_cast<double>(expert.cols());
}

double ppo_surrogate(double ratio, double advantage, double eps) {
  const double clipped = std::clamp(ratio, 1.0 - eps, 1.0 + eps);
  return -std::min(ratio * advantage, clipped * advantage);
}

double ppo_surrogate_grad(double ratio, double advantage, double eps) {
  const double clipped = std::clamp(ratio, 1.0 - eps, 1.0 + eps);
  if (ratio * advantage <= clipped * advantage) return -advantage;
  return 0.0;  // the clipped branch is active and flat in ratio
}

namespace {

// Adds d/dlogits of coef * CE(target, probs) for column n.
void add_ce_grad(const Matrix& probs, const Matrix& target, Index n, double coef, Matrix& d_logits) {
  const Index a_count = probs.rows();
  Vector dprobs = Vector::Zero(a_count);
  for (Index a = 0; a < a_count; ++a) {
    const double t = target(a, n);
    if (t != 0.0 && probs(a, n) > diff::kProbFloor) dprobs(a) = -coef * t / probs(a, n);
  }
  d_logits.col(n) += diff::softmax_backward(probs.col(n), dprobs);
}

}  // namespace

LossResult compute_loss(const Matrix& main_probs, const Matrix& aux_probs, const RowVector& values,
                        const LossBatch& batch, const LossConfig& config) {
  const Index n_cols = main_probs.cols();
  const Index n_actions = main_probs.rows();
  if (n_cols == 0) throw std::invalid_argument("compute_loss: empty batch");
  const double inv_n = 1.0 / static_cast<double>(n_cols);

  const bool needs_expert = config.main == MainTerm::Imitation || config.main == MainTerm::StaticMix ||
                            config.main == MainTerm::Advisor || config.aux_term;
  const bool needs_ppo = config.ppo_term && config.main != MainTerm::Imitation;
  if (needs_expert && (batch.expert.cols() != n_cols || batch.expert.rows() != n_actions)) {
    throw std::invalid_argument("compute_loss: expert labels required for this loss");
  }
  if (needs_ppo && (static_cast<Index>(batch.actions.size()) != n_cols || batch.old_log_probs.size() != n_cols ||
                    batch.advantages.size() != n_cols)) {
    throw std::invalid_argument("compute_loss: PPO ingredients missing");
  }
  if (config.value_term && batch.returns.size() != n_cols) throw std::invalid_argument("compute_loss: returns missing");
  if (config.frozen_weights && config.frozen_weights->size() != n_cols) {
    throw std::invalid_argument("compute_loss: frozen weight count mismatch");
  }

  LossResult r;
  r.d_main_logits = Matrix::Zero(n_actions, n_cols);
  r.d_aux_logits = Matrix::Zero(n_actions, n_cols);
  r.d_values = RowVector::Zero(n_cols);
  r.weights = RowVector::Zero(n_cols);

  double main_total = 0.0;
  for (Index n = 0; n < n_cols; ++n) {
    double w = 0.0;
    switch (config.main) {
      case MainTerm::Imitation: w = 1.0; break;
      case MainTerm::Ppo: w = 0.0; break;
      case MainTerm::StaticMix: w = config.static_weight; break;
      case MainTerm::Advisor:
        w = config.frozen_weights ? (*config.frozen_weights)(n)
                                  : advisor_weight(batch.expert.col(n), aux_probs.col(n), config.advisor);
        break;
    }
    r.weights(n) = w;

    if (config.main != MainTerm::Ppo) {
      const double ce = diff::cross_entropy(batch.expert.col(n), main_probs.col(n));
      r.imitation += ce * inv_n;
      main_total += w * ce;
      if (w != 0.0) add_ce_grad(main_probs, batch.expert, n, w * inv_n, r.d_main_logits);
    }
    if (needs_ppo) {
      const int a = batch.actions[static_cast<std::size_t>(n)];
      const double p = main_probs(a, n);
      const double ratio = std::exp(diff::clamped_log(p) - batch.old_log_probs(n));
      const double adv = batch.advantages(n);
      const double s = ppo_surrogate(ratio, adv, config.clip_eps);
      r.ppo += s * inv_n;
      main_total += (1.0 - w) * s;
      if (w != 1.0 && p > diff::kProbFloor) {
        const double d_ratio = (1.0 - w) * inv_n * ppo_surrogate_grad(ratio, adv, config.clip_eps);
        Vector dprobs = Vector::Zero(n_actions);
        dprobs(a) = d_ratio * ratio / p;
        r.d_main_logits.col(n) += diff::softmax_backward(main_probs.col(n), dprobs);
      }
    }
    if (config.aux_term) {
      r.aux += diff::cross_entropy(batch.expert.col(n), aux_probs.col(n)) * inv_n;
      add_ce_grad(aux_probs, batch.expert, n, inv_n, r.d_aux_logits);
    }
    if (config.value_term) {
      const double err = values(n) - batch.returns(n);
      r.value += err * err * inv_n;
      r.d_values(n) = 2.0 * config.value_coef * err * inv_n;
    }
  }
  r.total = main_total * inv_n + (config.value_term ? config.value_coef * r.value : 0.0) +
            (config.aux_term ? r.aux : 0.0);
  return r;
}

void normalize_advantages(RowVector& adv) {
  if (adv.size() == 0) return;
  const double mean = adv.mean();
  const double var = (adv.array() - mean).square().mean();
  adv = (adv.array() - mean) / (std::sqrt(var) + 1e-5);
}

}  // namespace advlab::learn
