#pragma once

#include "advlab/diff/param_store.hpp"

#include <map>
#include <string>

namespace advlab::diff {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Adam with bias correction. Moments are keyed by parameter name and start at zero.
class Adam {
 public:
  explicit Adam(const ParamStore& params, AdamConfig config = {});

  /// Applies one update from the gradients currently held in `params` and
  /// increments params.step_count.
  void step(ParamStore& params, double lr);

  const Matrix& first_moment(const std::string& name) const { return m_.at(name); }
  const Matrix& second_moment(const std::string& name) const { return v_.at(name); }
  const AdamConfig& config() const { return config_; }

 private:
  AdamConfig config_;
  std::map<std::string, Matrix> m_;
  std::map<std::string, Matrix> v_;
};

/// Global L2 norm over every gradient in the store.
double global_grad_norm(const ParamStore& params);

/// Scales all gradients by max_norm / norm when the global norm exceeds
/// max_norm. Returns the factor applied (1 when untouched).
double clip_global_norm(ParamStore& params, double max_norm);

}  // namespace advlab::diff
