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

#include "afpc/nn/losses.hpp"

#include <cmath>

#include "afpc/error.hpp"

namespace afpc::nn {

template <typename T>
LossValue<T> least_squares_term(const Matrix<T>& d_out, double target) {
  LossValue<T> out;
  out.grad = Matrix<T>(d_out.rows, d_out.cols);
  if (d_out.empty()) return out;
  const double n = static_cast<double>(d_out.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < d_out.size(); ++i) {
    const double diff = static_cast<double>(d_out.data[i]) - target;
    acc += diff * diff;
    out.grad.data[i] = static_cast<T>(2.0 * diff / n);
  }
  out.value = acc / n;
  return out;
}

template <typename T>
LossValue<T> l1_term(const Matrix<T>& pred, const Matrix<T>& target, double lambda_l1) {
  if (pred.rows != target.rows || pred.cols != target.cols)
    fail(ErrorCode::ShapeMismatch, "L1 prediction and target shapes differ");
  LossValue<T> out;
  out.grad = Matrix<T>(pred.rows, pred.cols);
  if (pred.rows == 0) return out;
  const double rows = static_cast<double>(pred.rows);
  const T g = static_cast<T>(lambda_l1 / rows);
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double diff = static_cast<double>(pred.data[i]) - static_cast<double>(target.data[i]);
    acc += std::abs(diff);
    out.grad.data[i] = diff > 0.0 ? g : (diff < 0.0 ? -g : T(0));
  }
  out.value = lambda_l1 * acc / rows;
  return out;
}

namespace {

double mean_square_from(std::span<const double> x, double target) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += (v - target) * (v - target);
  return acc / static_cast<double>(x.size());
}

}  // namespace

double loss_d(std::span<const double> d_real, std::span<const double> d_fake) {
  return mean_square_from(d_real, 1.0) + mean_square_from(d_fake, 0.0);
}

double loss_g(std::span<const double> d_fake, const Matrix<double>& irm_hat, const Matrix<double>& irm,
              double lambda_l1) {
  return mean_square_from(d_fake, 1.0) + l1_term(irm_hat, irm, lambda_l1).value;
}

template LossValue<float> least_squares_term<float>(const Matrix<float>&, double);
template LossValue<double> least_squares_term<double>(const Matrix<double>&, double);
template LossValue<float> l1_term<float>(const Matrix<float>&, const Matrix<float>&, double);
template LossValue<double> l1_term<double>(const Matrix<double>&, const Matrix<double>&, double);

}  // namespace afpc::nn
