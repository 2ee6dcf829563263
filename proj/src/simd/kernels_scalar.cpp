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

#include <cmath>
#include <vector>

#include "simd/kernels_impl.hpp"

namespace afpc::simd::detail {

namespace {

// Reference GEMM. Each C entry is accumulated over p in ascending order.
template <typename T>
void gemm_scalar(Transpose ta, Transpose tb, std::size_t m, std::size_t n, std::size_t k, const T* a, std::size_t lda,
                 const T* b, std::size_t ldb, T beta, T* c, std::size_t ldc) {
  std::vector<T> bt(k * n);
  for (std::size_t p = 0; p < k; ++p)
    for (std::size_t j = 0; j < n; ++j) bt[p * n + j] = tb == Transpose::No ? b[p * ldb + j] : b[j * ldb + p];
  std::vector<T> acc(n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) acc[j] = T(0);
    for (std::size_t p = 0; p < k; ++p) {
      const T aip = ta == Transpose::No ? a[i * lda + p] : a[p * lda + i];
      const T* brow = bt.data() + p * n;
      for (std::size_t j = 0; j < n; ++j) acc[j] += aip * brow[j];
    }
    T* crow = c + i * ldc;
    if (beta == T(0))
      for (std::size_t j = 0; j < n; ++j) crow[j] = acc[j];
    else
      for (std::size_t j = 0; j < n; ++j) crow[j] = acc[j] + beta * crow[j];
  }
}

template <typename T>
void adam_scalar(T* param, const T* grad, T* m, T* v, std::size_t n, const AdamCoeffs<T>& c) {
  const T one_minus_b1 = T(1) - c.beta1;
  const T one_minus_b2 = T(1) - c.beta2;
  for (std::size_t i = 0; i < n; ++i) {
    const T g = grad[i];
    m[i] = c.beta1 * m[i] + one_minus_b1 * g;
    v[i] = c.beta2 * v[i] + one_minus_b2 * (g * g);
    const T mhat = m[i] / c.bias_correction1;
    const T vhat = v[i] / c.bias_correction2;
    param[i] -= c.rate * mhat / (std::sqrt(vhat) + c.epsilon);
  }
}

}  // namespace

const KernelTable kScalarTable{Backend::Scalar, &gemm_scalar<float>, &gemm_scalar<double>, &adam_scalar<float>,
                               &adam_scalar<double>};

}  // namespace afpc::simd::detail
