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

#include <cstddef>
#include <optional>
#include <string_view>

namespace afpc::simd {

enum class Backend { Scalar, Avx2 };

std::string_view to_string(Backend backend);
std::optional<Backend> parse_backend(std::string_view name);

enum class Transpose : bool { No = false, Yes = true };

/// C = op(A) op(B) + beta C, row-major. op(A) is m x k, op(B) is k x n.
/// beta must be 0 or 1; with beta == 0 the previous contents of C are ignored.
template <typename T>
using GemmFn = void (*)(Transpose ta, Transpose tb, std::size_t m, std::size_t n, std::size_t k, const T* a,
                        std::size_t lda, const T* b, std::size_t ldb, T beta, T* c, std::size_t ldc);

template <typename T>
struct AdamCoeffs {
  T rate;
  T beta1;
  T beta2;
  T epsilon;
  T bias_correction1;  // 1 - beta1^t
  T bias_correction2;  // 1 - beta2^t
};

/// m = b1 m + (1-b1) g ; v = b2 v + (1-b2) g^2 ;
/// p -= rate * (m / c1) / (sqrt(v / c2) + eps)
template <typename T>
using AdamFn = void (*)(T* param, const T* grad, T* m, T* v, std::size_t n, const AdamCoeffs<T>& c);

struct KernelTable {
  Backend backend;
  GemmFn<float> gemm_f32;
  GemmFn<double> gemm_f64;
  AdamFn<float> adam_f32;
  AdamFn<double> adam_f64;
};

bool backend_available(Backend backend);
Backend best_backend();

/// Table for a specific backend. Throws InvalidArgument if it is unavailable.
const KernelTable& kernels_for(Backend backend);

/// Active table; defaults to best_backend() unless AFPC_KERNELS names another.
const KernelTable& kernels();
Backend active_backend();
void set_backend(Backend backend);

inline void gemm(Transpose ta, Transpose tb, std::size_t m, std::size_t n, std::size_t k, const float* a,
                 std::size_t lda, const float* b, std::size_t ldb, float beta, float* c, std::size_t ldc) {
  kernels().gemm_f32(ta, tb, m, n, k, a, lda, b, ldb, beta, c, ldc);
}
inline void gemm(Transpose ta, Transpose tb, std::size_t m, std::size_t n, std::size_t k, const double* a,
                 std::size_t lda, const double* b, std::size_t ldb, double beta, double* c, std::size_t ldc) {
  kernels().gemm_f64(ta, tb, m, n, k, a, lda, b, ldb, beta, c, ldc);
}
inline void adam_update(float* p, const float* g, float* m, float* v, std::size_t n, const AdamCoeffs<float>& c) {
  kernels().adam_f32(p, g, m, v, n, c);
}
inline void adam_update(double* p, const double* g, double* m, double* v, std::size_t n,
                        const AdamCoeffs<double>& c) {
  kernels().adam_f64(p, g, m, v, n, c);
}

}  // namespace afpc::simd
