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
#include <vector>

#include "afpc/nn/network.hpp"

namespace afpc::nn {

struct AdamHyper {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  bool operator==(const AdamHyper&) const = default;
};

/// First/second moment accumulators mirroring a network's parameters.
template <typename T>
struct AdamState {
  std::vector<Matrix<T>> m_weights, v_weights;
  std::vector<std::vector<T>> m_bias, v_bias;
  std::uint64_t step = 0;

  bool operator==(const AdamState&) const = default;
};

template <typename T>
AdamState<T> make_adam_state(const DenseNetwork<T>& net);

/// One bias-corrected ADAM update of every parameter of `net`.
template <typename T>
void adam_step(DenseNetwork<T>& net, const Gradients<T>& grads, AdamState<T>& state, double rate,
               const AdamHyper& hyper = {});

}  // namespace afpc::nn
