#pragma once

#include "advlab/diff/param_store.hpp"

#include <limits>
#include <optional>
#include <vector>

namespace advlab::learn {

using diff::Index;
using diff::Matrix;
using diff::RowVector;
using diff::Vector;

struct AdvisorParams {
  double alpha = 5.0;
  double beta = std::numeric_limits<double>::infinity();
};

/// m(x) = exp(-alpha x) * 1[x <= beta].
double advisor_weight_from_kl(double kl, const AdvisorParams& p);
/// The weight for one state; no gradient is ever taken through it.
double advisor_weight(const Vector& expert, const Vector& aux, const AdvisorParams& p);

/// Mean cross-entropy between expert columns and predicted columns.
double bc_loss(const Matrix& expert, const Matrix& predicted);

/// Per-sample clipped surrogate -min(rA, clip(r, 1-eps, 1+eps)A).
double ppo_surrogate(double ratio, double advantage, double eps);
/// d/d(ratio) of ppo_surrogate, taking the unclipped branch on ties.
double ppo_surrogate_grad(double ratio, double advantage, double eps);

/// How the main actor is trained: w * CE + (1 - w) * PPO per sample.
enum class MainTerm { Imitation, Ppo, StaticMix, Advisor };

struct LossConfig {
  MainTerm main = MainTerm::Ppo;
  double static_weight = 0.5;
  AdvisorParams advisor;
  /// When false the (1 - w) PPO share is dropped (imitation steps on demos).
  bool ppo_term = true;
  double clip_eps = 0.1;
  double value_coef = 0.5;
  bool value_term = true;
  bool aux_term = false;
  /// Advisor weights to use instead of recomputing them (finite-difference checks).
  std::optional<RowVector> frozen_weights;
};

/// Per-column training targets, aligned with a NetOutput.
struct LossBatch {
  std::vector<int> actions;
  RowVector old_log_probs;
  RowVector advantages;
  RowVector returns;
  Matrix expert;  // actions x N; empty when no expert labels exist
};

struct LossResult {
  double total = 0.0;
  double imitation = 0.0;  // mean CE(expert, main)
  double ppo = 0.0;        // mean surrogate
  double value = 0.0;      // mean squared error
  double aux = 0.0;        // mean CE(expert, aux)
  RowVector weights;       // per-sample w of the imitation term
  Matrix d_main_logits;
  Matrix d_aux_logits;
  RowVector d_values;
};

/// Computes the loss and its gradient w.r.t. logits and values.
LossResult compute_loss(const Matrix& main_probs, const Matrix& aux_probs, const RowVector& values,
                        const LossBatch& batch, const LossConfig& config);

/// In-place normalisation to zero mean and unit std (eps 1e-5).
void normalize_advantages(RowVector& adv);

}  // namespace advlab::learn
