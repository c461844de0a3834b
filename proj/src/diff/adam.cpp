#include "advlab/diff/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace advlab::diff {

Adam::Adam(const ParamStore& params, AdamConfig config) : config_(config) {
  for (const auto& [name, t] : params) {
    m_.emplace(name, Matrix::Zero(t.value.rows(), t.value.cols()));
    v_.emplace(name, Matrix::Zero(t.value.rows(), t.value.cols()));
  }
}

void Adam::step(ParamStore& params, double lr) {
  if (params.size() != m_.size()) throw std::invalid_argument("Adam: parameter set changed");
  params.step_count += 1;
  const double t = static_cast<double>(params.step_count);
  const double correction1 = 1.0 - std::pow(config_.beta1, t);
  const double correction2 = 1.0 - std::pow(config_.beta2, t);
  for (auto& [name, p] : params) {
    Matrix& m = m_.at(name);
    Matrix& v = v_.at(name);
    m = config_.beta1 * m + (1.0 - config_.beta1) * p.grad;
    v = config_.beta2 * v + (1.0 - config_.beta2) * p.grad.cwiseProduct(p.grad);
    p.value.array() -= lr * (m.array() / correction1) / ((v.array() / correction2).sqrt() + config_.eps);
  }
}

double global_grad_norm(const ParamStore& params) {
  double sq = 0.0;
  for (const auto& [name, p] : params) sq += p.grad.squaredNorm();
  return std::sqrt(sq);
}

double clip_global_norm(ParamStore& params, double max_norm) {
  const double norm = global_grad_norm(params);
  if (!(norm > max_norm)) return 1.0;
  const double factor = max_norm / norm;
  for (auto& [name, p] : params) p.grad *= factor;
  return factor;
}

}  // namespace advlab::diff
