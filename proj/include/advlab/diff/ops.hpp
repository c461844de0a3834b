#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>

namespace advlab::diff {

/// Probabilities are clamped to this floor before any logarithm.
inline constexpr double kProbFloor = 1e-8;

/// Bitmask of legal actions; bit a set means action a may be taken.
using ActionMask = std::uint32_t;
inline constexpr ActionMask kAllActions = ~ActionMask{0};

template <typename Scalar>
Scalar clamped_log(Scalar p) {
  return std::log(std::max(p, static_cast<Scalar>(kProbFloor)));
}

/// Column-wise softmax of a (num_actions x batch) logit matrix.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> softmax_columns(
    const Eigen::MatrixBase<Derived>& logits) {
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(logits.rows(), logits.cols());
  for (Eigen::Index j = 0; j < logits.cols(); ++j) {
    const Scalar m = logits.col(j).maxCoeff();
    out.col(j) = (logits.col(j).array() - m).exp().matrix();
    out.col(j) /= out.col(j).sum();
  }
  return out;
}

/// Softmax restricted to legal actions; illegal entries are exactly zero.
/// One mask per column; an empty span means every action is legal.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> masked_softmax_columns(
    const Eigen::MatrixBase<Derived>& logits, std::span<const ActionMask> masks) {
  using Scalar = typename Derived::Scalar;
  if (masks.empty()) return softmax_columns(logits);
  if (static_cast<Eigen::Index>(masks.size()) != logits.cols()) {
    throw std::invalid_argument("masked_softmax_columns: one mask per column required");
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(logits.rows(), logits.cols());
  for (Eigen::Index j = 0; j < logits.cols(); ++j) {
    const ActionMask mask = masks[static_cast<std::size_t>(j)];
    Scalar m = -std::numeric_limits<Scalar>::infinity();
    for (Eigen::Index a = 0; a < logits.rows(); ++a) {
      if (mask >> a & 1U) m = std::max(m, logits(a, j));
    }
    if (!std::isfinite(m)) throw std::invalid_argument("masked_softmax_columns: empty action mask");
    Scalar total = 0;
    for (Eigen::Index a = 0; a < logits.rows(); ++a) {
      const Scalar e = (mask >> a & 1U) ? std::exp(logits(a, j) - m) : Scalar{0};
      out(a, j) = e;
      total += e;
    }
    out.col(j) /= total;
  }
  return out;
}

/// Given softmax outputs and dL/dprobs, returns dL/dlogits. Masked entries have
/// zero probability and therefore receive zero gradient.
template <typename DerivedP, typename DerivedG>
Eigen::Matrix<typename DerivedP::Scalar, Eigen::Dynamic, Eigen::Dynamic> softmax_backward(
    const Eigen::MatrixBase<DerivedP>& probs, const Eigen::MatrixBase<DerivedG>& dprobs) {
  const auto inner = (probs.array() * dprobs.array()).colwise().sum();
  return (probs.array() * (dprobs.array().rowwise() - inner)).matrix();
}

/// -sum_a target(a) log predicted(a), predicted floor-clamped.
template <typename DerivedT, typename DerivedP>
typename DerivedT::Scalar cross_entropy(const Eigen::MatrixBase<DerivedT>& target,
                                        const Eigen::MatrixBase<DerivedP>& predicted) {
  using Scalar = typename DerivedT::Scalar;
  Scalar total = 0;
  for (Eigen::Index a = 0; a < target.size(); ++a) {
    if (target(a) != Scalar{0}) total -= target(a) * clamped_log(predicted(a));
  }
  return total;
}

/// sum_a p(a) log(p(a)/q(a)); zero-probability terms of p contribute nothing.
template <typename DerivedP, typename DerivedQ>
typename DerivedP::Scalar kl_divergence(const Eigen::MatrixBase<DerivedP>& p,
                                        const Eigen::MatrixBase<DerivedQ>& q) {
  using Scalar = typename DerivedP::Scalar;
  Scalar total = 0;
  for (Eigen::Index a = 0; a < p.size(); ++a) {
    if (p(a) > Scalar{0}) total += p(a) * (std::log(p(a)) - clamped_log(q(a)));
  }
  return std::max(total, Scalar{0});
}

template <typename Derived>
typename Derived::Scalar entropy(const Eigen::MatrixBase<Derived>& p) {
  return cross_entropy(p, p);
}

template <typename Scalar>
Scalar sigmoid(Scalar x) {
  return Scalar{1} / (Scalar{1} + std::exp(-x));
}

}  // namespace advlab::diff
