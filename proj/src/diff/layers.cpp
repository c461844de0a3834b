#include "advlab/diff/layers.hpp"

#include "advlab/diff/ops.hpp"

#include <cmath>
#include <stdexcept>

namespace advlab::diff {
namespace {

Matrix uniform_matrix(Index rows, Index cols, double bound, Rng& rng) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = rng.uniform(-bound, bound);
  return m;
}

}  // namespace

Linear::Linear(ParamStore& store, const std::string& name, Index in, Index out, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  weight_ = &store.add(name + ".weight", uniform_matrix(out, in, bound, rng));
  bias_ = &store.add(name + ".bias", Matrix::Zero(out, 1));
}

Matrix Linear::forward(const Matrix& x) const {
  if (x.rows() != weight_->value.cols()) throw std::invalid_argument("Linear: input width mismatch");
  Matrix y = weight_->value * x;
  y.colwise() += bias_->value.col(0);
  return y;
}

void Linear::accumulate(const Matrix& x, const Matrix& dy) {
  weight_->grad.noalias() += dy * x.transpose();
  bias_->grad.col(0) += dy.rowwise().sum();
}

Matrix Linear::backward(const Matrix& x, const Matrix& dy) {
  accumulate(x, dy);
  return weight_->value.transpose() * dy;
}

Embedding::Embedding(ParamStore& store, const std::string& name, Index vocab, Index dim, Rng& rng,
                     double init_scale, bool normal_init) {
  Matrix init(dim, vocab);
  for (Index j = 0; j < vocab; ++j)
    for (Index i = 0; i < dim; ++i)
      init(i, j) = normal_init ? init_scale * rng.normal() : rng.uniform(-init_scale, init_scale);
  table_ = &store.add(name + ".table", std::move(init));
}

void Embedding::check_id(std::int32_t id) const {
  if (id < 0 || id >= table_->value.cols()) throw std::out_of_range("Embedding: id out of vocabulary");
}

Matrix Embedding::forward(std::span<const std::int32_t> ids) const {
  Matrix out(dim(), static_cast<Index>(ids.size()));
  forward_into(ids, out, 0, 1, 0);
  return out;
}

void Embedding::forward_into(std::span<const std::int32_t> ids, Matrix& out, Index row_offset,
                             Index id_stride, Index id_offset) const {
  const Index d = dim();
  for (Index col = 0; col < out.cols(); ++col) {
    const std::int32_t id = ids[static_cast<std::size_t>(col * id_stride + id_offset)];
    check_id(id);
    out.block(row_offset, col, d, 1) = table_->value.col(id);
  }
}

void Embedding::backward(std::span<const std::int32_t> ids, const Matrix& dy) {
  backward_from(ids, dy, 0, 1, 0);
}

void Embedding::backward_from(std::span<const std::int32_t> ids, const Matrix& dy, Index row_offset,
                              Index id_stride, Index id_offset) {
  const Index d = dim();
  for (Index col = 0; col < dy.cols(); ++col) {
    const std::int32_t id = ids[static_cast<std::size_t>(col * id_stride + id_offset)];
    table_->grad.col(id) += dy.block(row_offset, col, d, 1);
  }
}

Lstm::Lstm(ParamStore& store, const std::string& name, Index in, Index hidden, Rng& rng) {
  w_ih_ = &store.add(name + ".w_ih", uniform_matrix(4 * hidden, in, 1.0 / std::sqrt(double(in)), rng));
  w_hh_ = &store.add(name + ".w_hh", uniform_matrix(4 * hidden, hidden, 1.0 / std::sqrt(double(hidden)), rng));
  bias_ = &store.add(name + ".bias", Matrix::Zero(4 * hidden, 1));
}

Matrix Lstm::forward(const Matrix& inputs, Index steps, Index lanes, std::span<const std::uint8_t> resets,
                     Matrix& h, Matrix& c, LstmTrace* trace) const {
  const Index H = hidden_size();
  if (inputs.rows() != input_size() || inputs.cols() != steps * lanes) {
    throw std::invalid_argument("Lstm: input shape mismatch");
  }
  if (h.rows() != H || h.cols() != lanes || c.rows() != H || c.cols() != lanes) {
    throw std::invalid_argument("Lstm: state shape mismatch");
  }
  if (!resets.empty() && static_cast<Index>(resets.size()) != steps * lanes) {
    throw std::invalid_argument("Lstm: reset flags must cover every column");
  }

  Matrix pre = w_ih_->value * inputs;
  pre.colwise() += bias_->value.col(0);

  Matrix hidden_out(H, steps * lanes);
  if (trace != nullptr) {
    trace->steps = steps;
    trace->lanes = lanes;
    trace->inputs = inputs;
    trace->gates.resize(4 * H, steps * lanes);
    trace->cells.resize(H, steps * lanes);
    trace->prev_hidden.resize(H, steps * lanes);
    trace->prev_cells.resize(H, steps * lanes);
  }

  Matrix g(4 * H, lanes);
  for (Index t = 0; t < steps; ++t) {
    if (!resets.empty()) {
      for (Index b = 0; b < lanes; ++b) {
        if (resets[static_cast<std::size_t>(t * lanes + b)] != 0) {
          h.col(b).setZero();
          c.col(b).setZero();
        }
      }
    }
    if (trace != nullptr) {
      trace->prev_hidden.middleCols(t * lanes, lanes) = h;
      trace->prev_cells.middleCols(t * lanes, lanes) = c;
    }
    g.noalias() = w_hh_->value * h;
    g += pre.middleCols(t * lanes, lanes);
    auto gi = g.topRows(H).array();
    auto gf = g.middleRows(H, H).array();
    auto gg = g.middleRows(2 * H, H).array();
    auto go = g.bottomRows(H).array();
    gi = 1.0 / (1.0 + (-gi).exp());
    gf = 1.0 / (1.0 + (-gf).exp());
    gg = gg.tanh();
    go = 1.0 / (1.0 + (-go).exp());
    c.array() = gf * c.array() + gi * gg;
    h.array() = go * c.array().tanh();
    hidden_out.middleCols(t * lanes, lanes) = h;
    if (trace != nullptr) {
      trace->gates.middleCols(t * lanes, lanes) = g;
      trace->cells.middleCols(t * lanes, lanes) = c;
    }
  }
  if (trace != nullptr) trace->hidden = hidden_out;
  return hidden_out;
}

Matrix Lstm::backward(const LstmTrace& trace, std::span<const std::uint8_t> resets, const Matrix& d_hidden) {
  const Index H = hidden_size();
  const Index lanes = trace.lanes;
  const Index steps = trace.steps;
  Matrix d_pre(4 * H, steps * lanes);
  Matrix dh_next = Matrix::Zero(H, lanes);
  Matrix dc_next = Matrix::Zero(H, lanes);
  Matrix dg(4 * H, lanes);

  for (Index t = steps - 1; t >= 0; --t) {
    const auto cols = [&](const Matrix& m) { return m.middleCols(t * lanes, lanes).array(); };
    const auto g = trace.gates.middleCols(t * lanes, lanes);
    const auto gi = g.topRows(H).array();
    const auto gf = g.middleRows(H, H).array();
    const auto gg = g.middleRows(2 * H, H).array();
    const auto go = g.bottomRows(H).array();
    const Eigen::ArrayXXd tanh_c = cols(trace.cells).tanh();

    const Eigen::ArrayXXd dh = cols(d_hidden) + dh_next.array();
    const Eigen::ArrayXXd dc = dc_next.array() + dh * go * (1.0 - tanh_c.square());

    dg.topRows(H).array() = dc * gg * gi * (1.0 - gi);
    dg.middleRows(H, H).array() = dc * cols(trace.prev_cells) * gf * (1.0 - gf);
    dg.middleRows(2 * H, H).array() = dc * gi * (1.0 - gg.square());
    dg.bottomRows(H).array() = dh * tanh_c * go * (1.0 - go);
    d_pre.middleCols(t * lanes, lanes) = dg;

    dh_next.noalias() = w_hh_->value.transpose() * dg;
    dc_next.array() = dc * gf;
    if (!resets.empty()) {
      for (Index b = 0; b < lanes; ++b) {
        if (resets[static_cast<std::size_t>(t * lanes + b)] != 0) {
          dh_next.col(b).setZero();
          dc_next.col(b).setZero();
        }
      }
    }
  }

  w_ih_->grad.noalias() += d_pre * trace.inputs.transpose();
  w_hh_->grad.noalias() += d_pre * trace.prev_hidden.transpose();
  bias_->grad.col(0) += d_pre.rowwise().sum();
  return w_ih_->value.transpose() * d_pre;
}

}  // namespace advlab::diff
