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

#include "afpc/nn/network.hpp"

#include <cmath>

#include "afpc/error.hpp"
#include "afpc/simd/kernels.hpp"

namespace afpc::nn {

using simd::Transpose;

std::string_view to_string(Activation act) {
  switch (act) {
    case Activation::Relu: return "relu";
    case Activation::LeakyRelu: return "leaky_relu";
    case Activation::Sigmoid: return "sigmoid";
  }
  return "?";
}

Activation parse_activation(std::string_view name) {
  if (name == "relu") return Activation::Relu;
  if (name == "leaky_relu") return Activation::LeakyRelu;
  if (name == "sigmoid") return Activation::Sigmoid;
  fail(ErrorCode::InvalidArgument, "unknown activation '" + std::string(name) + "'");
}

template <typename T>
std::vector<std::size_t> DenseNetwork<T>::dims() const {
  std::vector<std::size_t> d;
  if (layers.empty()) return d;
  d.push_back(layers.front().inputs());
  for (const auto& l : layers) d.push_back(l.outputs());
  return d;
}

std::size_t parameter_count(const std::vector<std::size_t>& dims) {
  std::size_t total = 0;
  for (std::size_t i = 1; i < dims.size(); ++i) total += dims[i - 1] * dims[i] + dims[i];
  return total;
}

template <typename T>
DenseNetwork<T> init_network(const std::vector<std::size_t>& dims, const std::vector<Activation>& activations,
                             std::uint64_t seed, const std::vector<double>& dropout) {
  if (dims.size() < 2) fail(ErrorCode::BadDimensions, "a network needs at least input and output dimensions");
  if (activations.size() != dims.size() - 1)
    fail(ErrorCode::BadDimensions, "expected " + std::to_string(dims.size() - 1) + " activations, got " +
                                       std::to_string(activations.size()));
  if (!dropout.empty() && dropout.size() != dims.size() - 1)
    fail(ErrorCode::BadDimensions, "dropout rates must be given per layer");
  for (std::size_t d : dims)
    if (d == 0) fail(ErrorCode::BadDimensions, "layer dimensions must be positive");
  for (double r : dropout)
    require(r >= 0.0 && r < 1.0, ErrorCode::InvalidArgument, "dropout rate must lie in [0, 1)");

  Rng rng(seed);
  DenseNetwork<T> net;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    DenseLayer<T> layer;
    const double limit = std::sqrt(6.0 / static_cast<double>(dims[l] + dims[l + 1]));
    std::uniform_real_distribution<double> uni(-limit, limit);
    layer.weights = Matrix<T>(dims[l + 1], dims[l]);
    for (auto& w : layer.weights.data) w = static_cast<T>(uni(rng));
    layer.bias.assign(dims[l + 1], T(0));
    layer.activation = activations[l];
    layer.dropout = dropout.empty() ? 0.0 : dropout[l];
    net.layers.push_back(std::move(layer));
  }
  return net;
}

namespace {

template <typename T>
void activate(Activation act, std::span<T> x) {
  switch (act) {
    case Activation::Relu:
      for (auto& v : x) v = v > T(0) ? v : T(0);
      break;
    case Activation::LeakyRelu:
      for (auto& v : x) v = v > T(0) ? v : static_cast<T>(kLeakySlope) * v;
      break;
    case Activation::Sigmoid:
      for (auto& v : x) v = T(1) / (T(1) + std::exp(-v));
      break;
  }
}

// grad *= act'(z), written in terms of the activation output y.
template <typename T>
void activation_backward(Activation act, std::span<const T> y, std::span<T> grad) {
  switch (act) {
    case Activation::Relu:
      for (std::size_t i = 0; i < y.size(); ++i)
        if (!(y[i] > T(0))) grad[i] = T(0);
      break;
    case Activation::LeakyRelu:
      for (std::size_t i = 0; i < y.size(); ++i)
        if (!(y[i] > T(0))) grad[i] *= static_cast<T>(kLeakySlope);
      break;
    case Activation::Sigmoid:
      for (std::size_t i = 0; i < y.size(); ++i) grad[i] *= y[i] * (T(1) - y[i]);
      break;
  }
}

}  // namespace

template <typename T>
Matrix<T> forward(const DenseNetwork<T>& net, const Matrix<T>& input, Mode mode, Rng& rng, Tape<T>* tape) {
  if (net.layers.empty()) fail(ErrorCode::BadDimensions, "empty network");
  if (input.cols != net.input_dim())
    fail(ErrorCode::DimensionMismatch, "network expects " + std::to_string(net.input_dim()) + " inputs, got " +
                                           std::to_string(input.cols));
  if (tape) {
    tape->owner = &net;
    tape->inputs.clear();
    tape->outputs.clear();
    tape->keep_scale.clear();
  }
  const std::size_t batch = input.rows;
  Matrix<T> x = input;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const DenseLayer<T>& layer = net.layers[l];
    Matrix<T> y(batch, layer.outputs());
    if (batch > 0)
      simd::gemm(Transpose::No, Transpose::Yes, batch, layer.outputs(), layer.inputs(), x.data.data(), x.cols,
                 layer.weights.data.data(), layer.weights.cols, T(0), y.data.data(), y.cols);
    for (std::size_t r = 0; r < batch; ++r) {
      auto row = y.row(r);
      for (std::size_t c = 0; c < row.size(); ++c) row[c] += layer.bias[c];
    }
    activate(layer.activation, std::span<T>(y.data));

    Matrix<T> keep;
    const bool drop = mode == Mode::Train && layer.dropout > 0.0 && l + 1 < net.layers.size();
    if (drop) {
      const double keep_prob = 1.0 - layer.dropout;
      const T scale = static_cast<T>(1.0 / keep_prob);
      keep = Matrix<T>(batch, layer.outputs());
      std::uniform_real_distribution<double> uni(0.0, 1.0);
      for (auto& k : keep.data) k = uni(rng) < keep_prob ? scale : T(0);
    }
    Matrix<T> next = y;
    if (drop)
      for (std::size_t i = 0; i < next.size(); ++i) next.data[i] *= keep.data[i];
    if (tape) {
      tape->inputs.push_back(std::move(x));
      tape->outputs.push_back(std::move(y));
      tape->keep_scale.push_back(std::move(keep));
    }
    x = std::move(next);
  }
  return x;
}

template <typename T>
Gradients<T> backward(const DenseNetwork<T>& net, const Tape<T>& tape, const Matrix<T>& grad_output,
                      BackwardOptions options) {
  if (tape.owner != &net || tape.inputs.size() != net.layers.size())
    fail(ErrorCode::TapeMismatch, "tape was not recorded by this network");
  const std::size_t batch = tape.inputs.front().rows;
  if (grad_output.rows != batch || grad_output.cols != net.output_dim())
    fail(ErrorCode::TapeMismatch, "output gradient shape does not match the taped pass");

  Gradients<T> grads;
  if (options.parameters) {
    grads.weights.resize(net.layers.size());
    grads.bias.resize(net.layers.size());
  }
  Matrix<T> g = grad_output;
  for (std::size_t idx = net.layers.size(); idx-- > 0;) {
    const DenseLayer<T>& layer = net.layers[idx];
    if (!tape.keep_scale[idx].empty())
      for (std::size_t i = 0; i < g.size(); ++i) g.data[i] *= tape.keep_scale[idx].data[i];
    activation_backward(layer.activation, std::span<const T>(tape.outputs[idx].data), std::span<T>(g.data));

    const Matrix<T>& in = tape.inputs[idx];
    if (options.parameters) {
      Matrix<T> dw(layer.outputs(), layer.inputs());
      simd::gemm(Transpose::Yes, Transpose::No, layer.outputs(), layer.inputs(), batch, g.data.data(), g.cols,
                 in.data.data(), in.cols, T(0), dw.data.data(), dw.cols);
      std::vector<T> db(layer.outputs(), T(0));
      for (std::size_t r = 0; r < batch; ++r) {
        const auto row = g.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) db[c] += row[c];
      }
      grads.weights[idx] = std::move(dw);
      grads.bias[idx] = std::move(db);
    }
    if (idx > 0 || options.input) {
      Matrix<T> dx(batch, layer.inputs());
      simd::gemm(Transpose::No, Transpose::No, batch, layer.inputs(), layer.outputs(), g.data.data(), g.cols,
                 layer.weights.data.data(), layer.weights.cols, T(0), dx.data.data(), dx.cols);
      g = std::move(dx);
    }
  }
  if (options.input) grads.input = std::move(g);
  return grads;
}

#define AFPC_INSTANTIATE_NETWORK(T)                                                                              \
  template struct DenseNetwork<T>;                                                                               \
  template DenseNetwork<T> init_network<T>(const std::vector<std::size_t>&, const std::vector<Activation>&,      \
                                           std::uint64_t, const std::vector<double>&);                           \
  template Matrix<T> forward<T>(const DenseNetwork<T>&, const Matrix<T>&, Mode, Rng&, Tape<T>*);                 \
  template Gradients<T> backward<T>(const DenseNetwork<T>&, const Tape<T>&, const Matrix<T>&, BackwardOptions);

AFPC_INSTANTIATE_NETWORK(float)
AFPC_INSTANTIATE_NETWORK(double)

#undef AFPC_INSTANTIATE_NETWORK

}  // namespace afpc::nn
