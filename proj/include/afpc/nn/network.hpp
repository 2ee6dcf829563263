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

#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "afpc/matrix.hpp"

namespace afpc::nn {

using Rng = std::mt19937_64;

enum class Activation : std::uint8_t { Relu, LeakyRelu, Sigmoid };

inline constexpr double kLeakySlope = 0.2;

std::string_view to_string(Activation act);
Activation parse_activation(std::string_view name);

enum class Mode { Train, Eval };

/// y = act(W x + b); W is out x in. Dropout (inverted scaling) follows the
/// activation in train mode when `dropout` > 0.
template <typename T>
struct DenseLayer {
  Matrix<T> weights;
  std::vector<T> bias;
  Activation activation = Activation::Relu;
  double dropout = 0.0;

  std::size_t inputs() const noexcept { return weights.cols; }
  std::size_t outputs() const noexcept { return weights.rows; }
  bool operator==(const DenseLayer&) const = default;
};

template <typename T>
struct DenseNetwork {
  std::vector<DenseLayer<T>> layers;

  std::size_t input_dim() const { return layers.empty() ? 0 : layers.front().inputs(); }
  std::size_t output_dim() const { return layers.empty() ? 0 : layers.back().outputs(); }
  std::vector<std::size_t> dims() const;
  bool operator==(const DenseNetwork&) const = default;
};

/// sum over layers of (fan_in * fan_out + fan_out).
std::size_t parameter_count(const std::vector<std::size_t>& dims);

template <typename T>
std::size_t parameter_count(const DenseNetwork<T>& net) {
  return parameter_count(net.dims());
}

struct LayerSpec {
  std::vector<std::size_t> dims;
  std::vector<Activation> activations;
  std::vector<double> dropout;
};

/// Glorot-uniform weights in +-sqrt(6 / (fan_in + fan_out)), zero biases.
/// `dropout` may be empty (no dropout) or hold one rate per layer.
template <typename T>
DenseNetwork<T> init_network(const std::vector<std::size_t>& dims, const std::vector<Activation>& activations,
                             std::uint64_t seed, const std::vector<double>& dropout = {});

/// Cached activations of one forward pass, consumed by backward().
template <typename T>
struct Tape {
  const void* owner = nullptr;
  std::vector<Matrix<T>> inputs;      // input to each layer (after upstream dropout)
  std::vector<Matrix<T>> outputs;     // activation output of each layer, before dropout
  std::vector<Matrix<T>> keep_scale;  // dropout multipliers (0 or 1/(1-rate)); empty if none
};

/// Forward pass over a batch (rows are samples).
template <typename T>
Matrix<T> forward(const DenseNetwork<T>& net, const Matrix<T>& input, Mode mode, Rng& rng, Tape<T>* tape = nullptr);

template <typename T>
struct Gradients {
  std::vector<Matrix<T>> weights;
  std::vector<std::vector<T>> bias;
  Matrix<T> input;

  bool empty() const noexcept { return weights.empty(); }
};

struct BackwardOptions {
  bool parameters = true;
  bool input = false;
};

/// Backpropagates dLoss/dOutput through the taped pass.
template <typename T>
Gradients<T> backward(const DenseNetwork<T>& net, const Tape<T>& tape, const Matrix<T>& grad_output,
                      BackwardOptions options = {});

}  // namespace afpc::nn
