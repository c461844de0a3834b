#include "advlab/diff/adam.hpp"
#include "advlab/diff/checkpoint.hpp"
#include "advlab/diff/layers.hpp"
#include "advlab/diff/ops.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <sstream>

using namespace advlab;
using namespace advlab::diff;

namespace {

Matrix random_matrix(Index r, Index c, Rng& rng, double scale = 1.0) {
  Matrix m(r, c);
  for (Index j = 0; j < c; ++j)
    for (Index i = 0; i < r; ++i) m(i, j) = scale * rng.normal();
  return m;
}

// Central differences of f w.r.t. every entry of t.
Matrix numeric_grad(Tensor& t, const std::function<double()>& f, double h = 1e-6) {
  Matrix g(t.value.rows(), t.value.cols());
  for (Index i = 0; i < t.value.size(); ++i) {
    const double keep = t.value.data()[i];
    t.value.data()[i] = keep + h;
    const double up = f();
    t.value.data()[i] = keep - h;
    const double down = f();
    t.value.data()[i] = keep;
    g.data()[i] = (up - down) / (2 * h);
  }
  return g;
}

double rel_err(const Matrix& a, const Matrix& b) {
  const double denom = std::max({a.norm(), b.norm(), 1e-12});
  return (a - b).norm() / denom;
}

}  // namespace

TEST(Ops, SoftmaxColumnsSumToOne) {
  Rng rng(3);
  const Matrix logits = random_matrix(5, 7, rng, 4.0);
  const Matrix p = softmax_columns(logits);
  for (Index j = 0; j < p.cols(); ++j) EXPECT_NEAR(p.col(j).sum(), 1.0, 1e-12);
  EXPECT_GT(p.minCoeff(), 0.0);
}

TEST(Ops, MaskedSoftmaxZeroesIllegal) {
  Matrix logits(4, 2);
  logits << 1, 2, 3, 4, 5, 6, 7, 8;
  const std::vector<ActionMask> masks{0b0101, 0b1000};
  const Matrix p = masked_softmax_columns(logits, masks);
  EXPECT_EQ(p(1, 0), 0.0);
  EXPECT_EQ(p(3, 0), 0.0);
  EXPECT_NEAR(p(2, 0), std::exp(5.0) / (std::exp(1.0) + std::exp(5.0)), 1e-12);
  EXPECT_DOUBLE_EQ(p(3, 1), 1.0);
  EXPECT_THROW(masked_softmax_columns(logits, std::vector<ActionMask>{0, 1}), std::invalid_argument);
}

TEST(Ops, CrossEntropyAndKl) {
  Vector uniform4 = Vector::Constant(4, 0.25);
  Vector onehot = Vector::Zero(4);
  onehot(2) = 1;
  EXPECT_NEAR(cross_entropy(onehot, uniform4), std::log(4.0), 1e-12);
  EXPECT_NEAR(kl_divergence(onehot, onehot), 0.0, 1e-15);
  EXPECT_NEAR(kl_divergence(onehot, uniform4), std::log(4.0), 1e-12);
  // Clamp keeps log(0) finite.
  Vector q = Vector::Zero(4);
  q(0) = 1;
  EXPECT_NEAR(cross_entropy(onehot, q), -std::log(kProbFloor), 1e-9);
}

TEST(Ops, SoftmaxBackwardMatchesFiniteDifference) {
  Rng rng(11);
  const Vector logits = random_matrix(5, 1, rng);
  const Vector w = random_matrix(5, 1, rng);
  auto f = [&](const Vector& z) { return w.dot(softmax_columns(z).col(0)); };
  const Matrix p = softmax_columns(logits);
  const Matrix analytic = softmax_backward(p, Matrix(w));
  for (Index a = 0; a < 5; ++a) {
    Vector up = logits, down = logits;
    up(a) += 1e-6;
    down(a) -= 1e-6;
    EXPECT_NEAR(analytic(a, 0), (f(up) - f(down)) / 2e-6, 1e-8);
  }
}

TEST(Layers, LinearGradient) {
  ParamStore store;
  Rng rng(1);
  Linear lin(store, "l", 6, 3, rng);
  const Matrix x = random_matrix(6, 5, rng);
  const Matrix w = random_matrix(3, 5, rng);
  auto loss = [&] { return (lin.forward(x).array() * w.array()).sum(); };
  store.zero_grad();
  const Matrix dx = lin.backward(x, w);
  for (auto& [name, t] : store) EXPECT_LT(rel_err(t.grad, numeric_grad(t, loss)), 1e-7) << name;
  EXPECT_LT(rel_err(dx, store.at("l.weight").value.transpose() * w), 1e-12);
}

TEST(Layers, EmbeddingGatherAndScatter) {
  ParamStore store;
  Rng rng(2);
  Embedding emb(store, "e", 5, 3, rng);
  const std::vector<std::int32_t> ids{4, 0, 4, 2};
  const Matrix y = emb.forward(ids);
  EXPECT_EQ(y.col(0), store.at("e.table").value.col(4));
  store.zero_grad();
  emb.backward(ids, Matrix::Ones(3, 4));
  EXPECT_DOUBLE_EQ(store.at("e.table").grad(0, 4), 2.0);
  EXPECT_DOUBLE_EQ(store.at("e.table").grad(0, 1), 0.0);
  const std::vector<std::int32_t> bad{5};
  EXPECT_THROW(emb.forward(bad), std::out_of_range);
}

TEST(Layers, LstmGradientWithResets) {
  ParamStore store;
  Rng rng(5);
  Lstm lstm(store, "lstm", 4, 3, rng);
  for (auto& [name, t] : store) t.value = random_matrix(t.value.rows(), t.value.cols(), rng, 0.5);
  const Index steps = 5, lanes = 2;
  const Matrix x = random_matrix(4, steps * lanes, rng);
  const Matrix w = random_matrix(3, steps * lanes, rng);
  const Matrix h0 = random_matrix(3, lanes, rng), c0 = random_matrix(3, lanes, rng);
  std::vector<std::uint8_t> resets(steps * lanes, 0);
  resets[2 * lanes + 1] = 1;  // lane 1 restarts at t = 2

  auto loss = [&] {
    Matrix h = h0, c = c0;
    return (lstm.forward(x, steps, lanes, resets, h, c, nullptr).array() * w.array()).sum();
  };
  Matrix h = h0, c = c0;
  LstmTrace trace;
  lstm.forward(x, steps, lanes, resets, h, c, &trace);
  store.zero_grad();
  const Matrix dx = lstm.backward(trace, resets, w);
  for (auto& [name, t] : store) EXPECT_LT(rel_err(t.grad, numeric_grad(t, loss)), 1e-6) << name;

  // Input gradient against differences on x.
  Matrix x_mut = x;
  auto loss_x = [&] {
    Matrix hh = h0, cc = c0;
    return (lstm.forward(x_mut, steps, lanes, resets, hh, cc, nullptr).array() * w.array()).sum();
  };
  Matrix numeric(4, steps * lanes);
  for (Index i = 0; i < x_mut.size(); ++i) {
    const double keep = x_mut.data()[i];
    x_mut.data()[i] = keep + 1e-6;
    const double up = loss_x();
    x_mut.data()[i] = keep - 1e-6;
    const double down = loss_x();
    x_mut.data()[i] = keep;
    numeric.data()[i] = (up - down) / 2e-6;
  }
  EXPECT_LT(rel_err(dx, numeric), 1e-6);
}

TEST(Layers, LstmResetIsolatesLanes) {
  ParamStore store;
  Rng rng(8);
  Lstm lstm(store, "lstm", 2, 4, rng);
  const Matrix x = random_matrix(2, 3, rng);
  std::vector<std::uint8_t> resets{1, 0, 0};
  Matrix h = random_matrix(4, 1, rng), c = random_matrix(4, 1, rng);
  const Matrix a = lstm.forward(x, 3, 1, resets, h, c, nullptr);
  Matrix h2 = Matrix::Zero(4, 1), c2 = Matrix::Zero(4, 1);
  const Matrix b = lstm.forward(x, 3, 1, {}, h2, c2, nullptr);
  EXPECT_EQ(a, b);
}

TEST(Adam, FirstStepsMatchHandComputation) {
  ParamStore store;
  store.add("p", (Matrix(2, 1) << 1.0, -2.0).finished());
  Adam adam(store);
  const double lr = 0.1, b1 = 0.9, b2 = 0.999, eps = 1e-8;
  double m = 0, v = 0, x = 1.0;
  for (int step = 1; step <= 3; ++step) {
    const double g = 2 * x;  // gradient of x^2
    store.at("p").grad = (Matrix(2, 1) << g, 0.0).finished();
    adam.step(store, lr);
    m = b1 * m + (1 - b1) * g;
    v = b2 * v + (1 - b2) * g * g;
    x -= lr * (m / (1 - std::pow(b1, step))) / (std::sqrt(v / (1 - std::pow(b2, step))) + eps);
    EXPECT_NEAR(store.at("p").value(0, 0), x, 1e-14);
    EXPECT_EQ(store.at("p").value(1, 0), -2.0);
  }
  EXPECT_EQ(store.step_count, 3u);
}

TEST(Adam, ClipGlobalNorm) {
  ParamStore store;
  store.add("a", Matrix::Zero(1, 1)).grad = Matrix::Constant(1, 1, 3.0);
  store.add("b", Matrix::Zero(1, 1)).grad = Matrix::Constant(1, 1, 4.0);
  EXPECT_DOUBLE_EQ(global_grad_norm(store), 5.0);
  EXPECT_NEAR(clip_global_norm(store, 0.5), 0.1, 1e-15);
  EXPECT_NEAR(global_grad_norm(store), 0.5, 1e-15);
  EXPECT_EQ(clip_global_norm(store, 1.0), 1.0);
}

TEST(Checkpoint, RoundTripIsExact) {
  ParamStore a, b;
  Rng rng(4);
  a.add("x", random_matrix(3, 2, rng));
  a.add("y", random_matrix(1, 5, rng));
  a.step_count = 17;
  b.add("x", Matrix::Zero(3, 2));
  b.add("y", Matrix::Zero(1, 5));
  std::stringstream ss;
  write_checkpoint(ss, a, "{\"k\":1}");
  EXPECT_EQ(read_checkpoint(ss, b), "{\"k\":1}");
  EXPECT_EQ(a.at("x").value, b.at("x").value);
  EXPECT_EQ(a.at("y").value, b.at("y").value);
  EXPECT_EQ(b.step_count, 17u);

  ParamStore wrong;
  wrong.add("x", Matrix::Zero(2, 2));
  std::stringstream again;
  write_checkpoint(again, a, "");
  EXPECT_THROW(read_checkpoint(again, wrong), std::runtime_error);
}

TEST(Random, StreamsAreReproducibleAndDistinct) {
  Rng a(42, 1), b(42, 1), c(42, 2);
  for (int i = 0; i < 10; ++i) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    EXPECT_NE(x, c.next());
  }
  Rng r(9);
  int hits[3] = {0, 0, 0};
  const std::vector<double> w{0.2, 0.0, 0.8};
  for (int i = 0; i < 20000; ++i) ++hits[r.categorical(w)];
  EXPECT_EQ(hits[1], 0);
  EXPECT_NEAR(hits[2] / 20000.0, 0.8, 0.02);
}
