#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace advlab::diff {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using Index = Eigen::Index;

/// A learnable array together with its gradient slot. Every tensor in this
/// project is two dimensional; a vector is a single column.
struct Tensor {
  Matrix value;
  Matrix grad;

  std::vector<Index> shape() const { return {value.rows(), value.cols()}; }
  Index size() const { return value.size(); }
  void zero_grad() { grad.setZero(value.rows(), value.cols()); }
};

/// Named learnable arrays. Iteration is in sorted name order, which fixes the
/// order of global-norm reductions and checkpoint records.
///
/// Element addresses are stable for the lifetime of the store, so layers keep
/// plain pointers to their tensors.
class ParamStore {
 public:
  ParamStore() = default;
  ParamStore(const ParamStore&) = delete;
  ParamStore& operator=(const ParamStore&) = delete;

  Tensor& add(const std::string& name, Matrix init);

  Tensor& at(const std::string& name);
  const Tensor& at(const std::string& name) const;
  bool contains(const std::string& name) const { return entries_.count(name) != 0; }

  auto begin() { return entries_.begin(); }
  auto end() { return entries_.end(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  std::size_t size() const { return entries_.size(); }
  Index total_elements() const;
  void zero_grad();

  /// Copies values (not gradients) from a store with identical names/shapes.
  void copy_values_from(const ParamStore& other);

  std::uint64_t step_count = 0;

 private:
  std::map<std::string, Tensor> entries_;
};

}  // namespace advlab::diff
