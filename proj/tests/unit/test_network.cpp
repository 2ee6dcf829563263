// Copyright 2026 The afpc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "afpc/error.hpp"
#include "afpc/nn/adam.hpp"
#include "afpc/nn/losses.hpp"
#include "afpc/nn/network.hpp"
#include "unit/gradcheck.hpp"
#include "unit/oracles.hpp"

using namespace afpc;
using namespace afpc::nn;

namespace {

long double act_ref(Activation a, long double x) {
  switch (a) {
    case Activation::Relu: return x > 0 ? x : 0;
    case Activation::LeakyRelu: return x > 0 ? x : 0.2L * x;
    case Activation::Sigmoid: return 1.0L / (1.0L + std::exp(-x));
  }
  return 0;
}

}  // namespace

TEST(ParameterCount, ClosedForm) {
  EXPECT_EQ(parameter_count({3, 4, 2}), 3u * 4 + 4 + 4 * 2 + 2);
  EXPECT_EQ(parameter_count({411, 512, 512, 512, 257}), 868097u);
  EXPECT_EQ(parameter_count({786, 512, 512, 512, 257}), 1060097u);
  EXPECT_EQ(parameter_count({984, 512, 512, 512, 257}), 1161473u);
  EXPECT_EQ(parameter_count({389, 512, 512, 512, 1}), 725505u);
}

TEST(Init, ShapesAndGlorotBounds) {
  const auto net = init_network<double>({10, 7, 3}, {Activation::Relu, Activation::Sigmoid}, 5, {0.2, 0.0});
  ASSERT_EQ(net.layers.size(), 2u);
  EXPECT_EQ(net.dims(), (std::vector<std::size_t>{10, 7, 3}));
  EXPECT_EQ(net.layers[0].dropout, 0.2);
  for (const auto& l : net.layers) {
    const double bound = std::sqrt(6.0 / (l.inputs() + l.outputs()));
    for (double w : l.weights.data) EXPECT_LE(std::fabs(w), bound);
    for (double b : l.bias) EXPECT_EQ(b, 0.0);
  }
  EXPECT_EQ(net, (init_network<double>({10, 7, 3}, {Activation::Relu, Activation::Sigmoid}, 5, {0.2, 0.0})));
  EXPECT_THROW(init_network<double>({10}, {}, 1), Error);
  EXPECT_THROW(init_network<double>({10, 0, 2}, {Activation::Relu, Activation::Relu}, 1), Error);
  EXPECT_THROW(init_network<double>({10, 3}, {Activation::Relu, Activation::Relu}, 1), Error);
}

TEST(Forward, MatchesDirectEvaluation) {
  auto net = init_network<double>({5, 4, 3, 2}, {Activation::LeakyRelu, Activation::Relu, Activation::Sigmoid}, 7);
  Rng rng(1);
  for (auto& l : net.layers)
    for (auto& b : l.bias) b = std::uniform_real_distribution<double>(-0.3, 0.3)(rng);
  const auto x = gradcheck::random_matrix(6, 5, rng, -2.0, 2.0);
  const auto y = forward(net, x, Mode::Eval, rng);
  ASSERT_EQ(y.rows, 6u);
  ASSERT_EQ(y.cols, 2u);
  for (std::size_t r = 0; r < 6; ++r) {
    std::vector<long double> h(x.row(r).begin(), x.row(r).end());
    for (const auto& l : net.layers) {
      std::vector<long double> next(l.outputs());
      for (std::size_t o = 0; o < l.outputs(); ++o) {
        long double acc = l.bias[o];
        for (std::size_t i = 0; i < l.inputs(); ++i) acc += l.weights(o, i) * h[i];
        next[o] = act_ref(l.activation, acc);
      }
      h = next;
    }
    for (std::size_t o = 0; o < 2; ++o) EXPECT_NEAR(y(r, o), static_cast<double>(h[o]), 1e-14);
  }
  EXPECT_THROW(forward(net, Matrix<double>(2, 4), Mode::Eval, rng), Error);
}

TEST(Forward, DropoutOnlyInTrainMode) {
  const auto net = init_network<double>({50, 400, 1}, {Activation::Relu, Activation::Sigmoid}, 3, {0.2, 0.0});
  Rng rng(4);
  const auto x = gradcheck::random_matrix(8, 50, rng, -1.0, 1.0);
  Rng r1(9), r2(10);
  EXPECT_EQ(forward(net, x, Mode::Eval, r1), forward(net, x, Mode::Eval, r2));
  Tape<double> tape;
  forward(net, x, Mode::Train, r1, &tape);
  ASSERT_EQ(tape.keep_scale.size(), 2u);
  const auto& keep = tape.keep_scale[0];
  ASSERT_EQ(keep.size(), 8u * 400u);
  std::size_t dropped = 0;
  for (double k : keep.data) {
    EXPECT_TRUE(k == 0.0 || k == 1.0 / 0.8);
    dropped += k == 0.0;
  }
  const double rate = static_cast<double>(dropped) / keep.size();
  EXPECT_NEAR(rate, 0.2, 0.03);
  EXPECT_TRUE(tape.keep_scale[1].empty());
}

TEST(Backward, SquaredOutputMatchesFiniteDifferences) {
  auto net = init_network<double>({6, 5, 4}, {Activation::LeakyRelu, Activation::Sigmoid}, 11);
  Rng rng(2);
  for (auto& l : net.layers)
    for (auto& b : l.bias) b = std::uniform_real_distribution<double>(-0.2, 0.2)(rng);
  const auto x = gradcheck::random_matrix(3, 6, rng, -1.0, 1.0);
  auto objective = [&] {
    Rng r(0);
    const auto y = forward(net, x, Mode::Eval, r);
    double s = 0;
    for (double v : y.data) s += 0.5 * v * v;
    return s;
  };
  Tape<double> tape;
  const auto y = forward(net, x, Mode::Eval, rng, &tape);
  const auto grads = backward(net, tape, y, {.parameters = true, .input = true});
  const auto res = gradcheck::compare(net, grads, objective, 1e-6);
  EXPECT_LT(res.max_rel_error, 1e-5);
  EXPECT_EQ(res.parameters, parameter_count(net));

  // Input gradient.
  Matrix<double> xm = x;
  for (std::size_t i = 0; i < xm.size(); ++i) {
    auto f = [&] {
      Rng r(0);
      const auto yy = forward(net, xm, Mode::Eval, r);
      double s = 0;
      for (double v : yy.data) s += 0.5 * v * v;
      return s;
    };
    const double num = oracle::central_difference(f, xm.data[i], 1e-6);
    EXPECT_LT(gradcheck::rel_error(grads.input.data[i], num), 1e-5);
  }
}

TEST(Backward, TapeFromAnotherNetworkIsRejected) {
  const auto a = init_network<double>({3, 2}, {Activation::Sigmoid}, 1);
  const auto b = init_network<double>({3, 2}, {Activation::Sigmoid}, 2);
  Rng rng(0);
  Tape<double> tape;
  const auto y = forward(a, Matrix<double>(1, 3, 0.5), Mode::Eval, rng, &tape);
  try {
    backward(b, tape, y);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TapeMismatch);
  }
}

TEST(GradientCheck, DiscriminatorObjective) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto r = gradcheck::check_discriminator(seed);
    EXPECT_LT(r.max_rel_error, 1e-4) << seed;
    EXPECT_EQ(r.parameters, parameter_count({11, 8, 8, 1}));
  }
}

TEST(GradientCheck, GeneratorObjective) {
  for (double lambda : {0.0, 100.0})
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const auto r = gradcheck::check_generator(seed, lambda);
      EXPECT_LT(r.max_rel_error, 1e-4) << "lambda " << lambda << " seed " << seed;
      EXPECT_EQ(r.parameters, parameter_count({20, 8, 8, 6}));
    }
}

TEST(Losses, ValuesAndGradients) {
  Matrix<double> d(4, 1);
  d.data = {0.9, 0.1, 0.5, 1.0};
  const auto ls = least_squares_term(d, 1.0);
  EXPECT_NEAR(ls.value, (0.01 + 0.81 + 0.25 + 0.0) / 4, 1e-15);
  EXPECT_NEAR(ls.grad.data[1], 2 * (0.1 - 1.0) / 4, 1e-15);

  Matrix<double> p(2, 3), t(2, 3);
  p.data = {0.1, 0.5, 0.9, 0.2, 0.2, 0.2};
  t.data = {0.0, 0.5, 1.0, 0.4, 0.1, 0.2};
  const auto l1 = l1_term(p, t, 100.0);
  EXPECT_NEAR(l1.value, 100.0 * ((0.1 + 0.0 + 0.1) + (0.2 + 0.1 + 0.0)) / 2, 1e-12);
  EXPECT_EQ(l1.grad.data, (std::vector<double>{50, 0, -50, -50, 50, 0}));

  const std::vector<double> real = {1.0, 0.5}, fake = {0.0, 0.5};
  EXPECT_NEAR(loss_d(real, fake), 0.125 + 0.125, 1e-15);
  EXPECT_NEAR(loss_g(fake, p, t, 0.0), (1.0 + 0.25) / 2, 1e-15);
}

TEST(Adam, ZeroGradientLeavesParametersUnchanged) {
  auto net = init_network<double>({4, 3}, {Activation::Sigmoid}, 1);
  const auto before = net;
  auto state = make_adam_state(net);
  Gradients<double> g;
  g.weights = {Matrix<double>(3, 4)};
  g.bias = {std::vector<double>(3, 0.0)};
  for (int i = 0; i < 3; ++i) adam_step(net, g, state, 1e-3);
  EXPECT_EQ(net, before);
  EXPECT_EQ(state.step, 3u);
}

TEST(Adam, MatchesReferenceFormula) {
  auto net = init_network<double>({2, 2}, {Activation::Sigmoid}, 3);
  auto state = make_adam_state(net);
  std::vector<double> p(net.layers[0].weights.data), m(4, 0.0), v(4, 0.0);
  const double rate = 1e-2, b1 = 0.9, b2 = 0.999, eps = 1e-8;
  Rng rng(5);
  for (int t = 1; t <= 5; ++t) {
    Gradients<double> g;
    g.weights = {gradcheck::random_matrix(2, 2, rng, -1, 1)};
    g.bias = {std::vector<double>(2, 0.0)};
    adam_step(net, g, state, rate);
    for (std::size_t i = 0; i < 4; ++i) {
      const double gi = g.weights[0].data[i];
      m[i] = b1 * m[i] + (1 - b1) * gi;
      v[i] = b2 * v[i] + (1 - b2) * gi * gi;
      const double mh = m[i] / (1 - std::pow(b1, t)), vh = v[i] / (1 - std::pow(b2, t));
      p[i] -= rate * mh / (std::sqrt(vh) + eps);
      EXPECT_NEAR(net.layers[0].weights.data[i], p[i], 1e-14) << t;
    }
  }
  // First step moves each parameter by about -rate * sign(g).
  auto net2 = init_network<double>({1, 1}, {Activation::Sigmoid}, 3);
  auto st2 = make_adam_state(net2);
  const double w0 = net2.layers[0].weights.data[0];
  Gradients<double> g;
  g.weights = {Matrix<double>(1, 1, 0.37)};
  g.bias = {std::vector<double>{-2.0}};
  adam_step(net2, g, st2, rate);
  EXPECT_NEAR(net2.layers[0].weights.data[0] - w0, -rate * 0.37 / (0.37 + eps), 1e-15);
  EXPECT_NEAR(net2.layers[0].bias[0], rate * 2.0 / (2.0 + eps), 1e-15);
}

TEST(Adam, IdenticalHistoriesGiveIdenticalUpdates) {
  auto net = init_network<double>({3, 2}, {Activation::Sigmoid}, 9);
  net.layers[0].weights.data.assign(6, 0.25);
  auto state = make_adam_state(net);
  Rng rng(1);
  for (int t = 0; t < 4; ++t) {
    const double gv = std::uniform_real_distribution<double>(-1, 1)(rng);
    Gradients<double> g;
    g.weights = {Matrix<double>(2, 3, gv)};
    g.bias = {std::vector<double>(2, gv)};
    adam_step(net, g, state, 1e-3);
  }
  for (double w : net.layers[0].weights.data) EXPECT_EQ(w, net.layers[0].weights.data[0]);
}

TEST(Adam, ShapeMismatch) {
  auto net = init_network<double>({3, 2}, {Activation::Sigmoid}, 9);
  auto state = make_adam_state(net);
  Gradients<double> g;
  g.weights = {Matrix<double>(3, 2)};
  g.bias = {std::vector<double>(2)};
  try {
    adam_step(net, g, state, 1e-3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ShapeMismatch);
  }
}
