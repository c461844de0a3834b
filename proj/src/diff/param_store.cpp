#include "advlab/diff/param_store.hpp"

#include <stdexcept>

namespace advlab::diff {

Tensor& ParamStore::add(const std::string& name, Matrix init) {
  if (entries_.count(name) != 0) {
    throw std::invalid_argument("duplicate parameter name: " + name);
  }
  Tensor t;
  t.grad = Matrix::Zero(init.rows(), init.cols());
  t.value = std::move(init);
  return entries_.emplace(name, std::move(t)).first->second;
}

Tensor& ParamStore::at(const std::string& name) {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw std::out_of_range("unknown parameter: " + name);
  return it->second;
}

const Tensor& ParamStore::at(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw std::out_of_range("unknown parameter: " + name);
  return it->second;
}

Index ParamStore::total_elements() const {
  Index n = 0;
  for (const auto& [name, t] : entries_) n += t.size();
  return n;
}

void ParamStore::zero_grad() {
  for (auto& [name, t] : entries_) t.zero_grad();
}

void ParamStore::copy_values_from(const ParamStore& other) {
  if (other.size() != size()) throw std::invalid_argument("parameter stores differ in size");
  for (auto& [name, t] : entries_) {
    const Tensor& src = other.at(name);
    if (src.value.rows() != t.value.rows() || src.value.cols() != t.value.cols()) {
      throw std::invalid_argument("shape mismatch copying parameter " + name);
    }
    t.value = src.value;
  }
  step_count = other.step_count;
}

}  // namespace advlab::diff
