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

#include "afpc/nn/adam.hpp"

#include <cmath>

#include "afpc/error.hpp"
#include "afpc/simd/kernels.hpp"

namespace afpc::nn {

template <typename T>
AdamState<T> make_adam_state(const DenseNetwork<T>& net) {
  AdamState<T> s;
  for (const auto& layer : net.layers) {
    s.m_weights.emplace_back(layer.weights.rows, layer.weights.cols);
    s.v_weights.emplace_back(layer.weights.rows, layer.weights.cols);
    s.m_bias.emplace_back(layer.bias.size(), T(0));
    s.v_bias.emplace_back(layer.bias.size(), T(0));
  }
  return s;
}

template <typename T>
void adam_step(DenseNetwork<T>& net, const Gradients<T>& grads, AdamState<T>& state, double rate,
               const AdamHyper& hyper) {
  const std::size_t n = net.layers.size();
  if (grads.weights.size() != n || grads.bias.size() != n || state.m_weights.size() != n)
    fail(ErrorCode::ShapeMismatch, "gradients or optimizer state do not match the network");
  for (std::size_t l = 0; l < n; ++l) {
    if (grads.weights[l].rows != net.layers[l].weights.rows || grads.weights[l].cols != net.layers[l].weights.cols || grads.bias[l].size() != net.layers[l].bias.size() ||
        state.m_weights[l].size() != net.layers[l].weights.size() || state.m_bias[l].size() != net.layers[l].bias.size())
      fail(ErrorCode::ShapeMismatch, "parameter shapes differ at layer " + std::to_string(l));
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const simd::AdamCoeffs<T> c{static_cast<T>(rate),
                              static_cast<T>(hyper.beta1),
                              static_cast<T>(hyper.beta2),
                              static_cast<T>(hyper.epsilon),
                              static_cast<T>(1.0 - std::pow(hyper.beta1, t)),
                              static_cast<T>(1.0 - std::pow(hyper.beta2, t))};
  for (std::size_t l = 0; l < n; ++l) {
    auto& layer = net.layers[l];
    simd::adam_update(layer.weights.data.data(), grads.weights[l].data.data(), state.m_weights[l].data.data(),
                      state.v_weights[l].data.data(), layer.weights.size(), c);
    simd::adam_update(layer.bias.data(), grads.bias[l].data(), state.m_bias[l].data(), state.v_bias[l].data(),
                      layer.bias.size(), c);
  }
}

template AdamState<float> make_adam_state<float>(const DenseNetwork<float>&);
template AdamState<double> make_adam_state<double>(const DenseNetwork<double>&);
template void adam_step<float>(DenseNetwork<float>&, const Gradients<float>&, AdamState<float>&, double,
                               const AdamHyper&);
template void adam_step<double>(DenseNetwork<double>&, const Gradients<double>&, AdamState<double>&, double,
                                const AdamHyper&);

}  // namespace afpc::nn
