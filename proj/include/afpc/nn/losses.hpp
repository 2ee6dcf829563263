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

#include <span>

#include "afpc/matrix.hpp"

namespace afpc::nn {

template <typename T>
struct LossValue {
  double value = 0.0;
  Matrix<T> grad;  // dLoss/dinput, same shape as the input
};

/// mean (d - target)^2 over the batch; the two halves of the least-squares
/// discriminator objective use target 1 (real) and 0 (fake).
template <typename T>
LossValue<T> least_squares_term(const Matrix<T>& d_out, double target);

/// mean(d_real - 1)^2 + mean(d_fake)^2
double loss_d(std::span<const double> d_real, std::span<const double> d_fake);

/// mean(d_fake - 1)^2 + lambda * mean over samples of ||irm_hat - irm||_1
double loss_g(std::span<const double> d_fake, const Matrix<double>& irm_hat, const Matrix<double>& irm,
              double lambda_l1);

/// lambda * mean over rows of sum_j |pred - target|, with its subgradient (sign(0) = 0).
template <typename T>
LossValue<T> l1_term(const Matrix<T>& pred, const Matrix<T>& target, double lambda_l1);

}  // namespace afpc::nn
