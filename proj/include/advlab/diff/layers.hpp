#pragma once

#include "advlab/diff/param_store.hpp"
#include "advlab/diff/random.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace advlab::diff {

/// y = W x + b on column batches.
class Linear {
 public:
  Linear(ParamStore& store, const std::string& name, Index in, Index out, Rng& rng);

  Matrix forward(const Matrix& x) const;
  /// Accumulates dW, db and returns dL/dx.
  Matrix backward(const Matrix& x, const Matrix& dy);
  /// As backward, without computing dL/dx.
  void accumulate(const Matrix& x, const Matrix& dy);

  Index in_features() const { return weight_->value.cols(); }
  Index out_features() const { return weight_->value.rows(); }

 private:
  Tensor* weight_;
  Tensor* bias_;
};

/// Lookup table stored as (dim x vocab); forward gathers columns.
/// A linear map applied to a one-hot input is exactly this lookup plus a bias,
/// which is how the 6400-wide lighthouse heads are evaluated.
class Embedding {
 public:
  Embedding(ParamStore& store, const std::string& name, Index vocab, Index dim, Rng& rng,
            double init_scale = 1.0, bool normal_init = true);

  Matrix forward(std::span<const std::int32_t> ids) const;
  /// Writes rows [row_offset, row_offset + dim) of out, column by column.
  void forward_into(std::span<const std::int32_t> ids, Matrix& out, Index row_offset,
                    Index id_stride, Index id_offset) const;
  void backward(std::span<const std::int32_t> ids, const Matrix& dy);
  void backward_from(std::span<const std::int32_t> ids, const Matrix& dy, Index row_offset,
                     Index id_stride, Index id_offset);

  Index vocab() const { return table_->value.cols(); }
  Index dim() const { return table_->value.rows(); }

 private:
  void check_id(std::int32_t id) const;
  Tensor* table_;
};

/// Saved activations for one LSTM sequence pass.
struct LstmTrace {
  Index steps = 0;
  Index lanes = 0;
  Matrix inputs;        // (in x steps*lanes)
  Matrix gates;         // activated gates i,f,g,o stacked (4H x steps*lanes)
  Matrix cells;         // c_t
  Matrix hidden;        // h_t
  Matrix prev_hidden;   // h_{t-1} after resets
  Matrix prev_cells;    // c_{t-1} after resets
};

/// Single-layer LSTM without peepholes. Gate order is (input, forget, cell, output).
/// Columns are time-major: column t*lanes + b holds lane b at step t.
class Lstm {
 public:
  Lstm(ParamStore& store, const std::string& name, Index in, Index hidden, Rng& rng);

  /// Runs `steps` steps. resets[t*lanes+b] != 0 zeroes lane b's state before step t.
  /// h and c hold the initial state on entry and the final state on return.
  Matrix forward(const Matrix& inputs, Index steps, Index lanes, std::span<const std::uint8_t> resets,
                 Matrix& h, Matrix& c, LstmTrace* trace) const;

  /// Back-propagates dL/dhidden through time. Returns dL/dinputs. No gradient
  /// flows into the initial state.
  Matrix backward(const LstmTrace& trace, std::span<const std::uint8_t> resets, const Matrix& d_hidden);

  Index hidden_size() const { return w_hh_->value.cols(); }
  Index input_size() const { return w_ih_->value.cols(); }

 private:
  Tensor* w_ih_;
  Tensor* w_hh_;
  Tensor* bias_;
};

}  // namespace advlab::diff
