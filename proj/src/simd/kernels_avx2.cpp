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

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "simd/kernels_impl.hpp"

namespace afpc::simd::detail {

namespace {

template <typename T>
struct Vec;

template <>
struct Vec<float> {
  using reg = __m256;
  static constexpr std::size_t lanes = 8;
  static reg zero() { return _mm256_setzero_ps(); }
  static reg set1(float x) { return _mm256_set1_ps(x); }
  static reg load(const float* p) { return _mm256_loadu_ps(p); }
  static void store(float* p, reg x) { _mm256_storeu_ps(p, x); }
  static reg add(reg a, reg b) { return _mm256_add_ps(a, b); }
  static reg mul(reg a, reg b) { return _mm256_mul_ps(a, b); }
  static reg div(reg a, reg b) { return _mm256_div_ps(a, b); }
  static reg sub(reg a, reg b) { return _mm256_sub_ps(a, b); }
  static reg sqrt(reg a) { return _mm256_sqrt_ps(a); }
  static reg fmadd(reg a, reg b, reg c) { return _mm256_fmadd_ps(a, b, c); }
};

template <>
struct Vec<double> {
  using reg = __m256d;
  static constexpr std::size_t lanes = 4;
  static reg zero() { return _mm256_setzero_pd(); }
  static reg set1(double x) { return _mm256_set1_pd(x); }
  static reg load(const double* p) { return _mm256_loadu_pd(p); }
  static void store(double* p, reg x) { _mm256_storeu_pd(p, x); }
  static reg add(reg a, reg b) { return _mm256_add_pd(a, b); }
  static reg mul(reg a, reg b) { return _mm256_mul_pd(a, b); }
  static reg div(reg a, reg b) { return _mm256_div_pd(a, b); }
  static reg sub(reg a, reg b) { return _mm256_sub_pd(a, b); }
  static reg sqrt(reg a) { return _mm256_sqrt_pd(a); }
  static reg fmadd(reg a, reg b, reg c) { return _mm256_fmadd_pd(a, b, c); }
};

constexpr std::size_t kMr = 6;
constexpr std::size_t kKc = 256;
constexpr std::size_t kMc = 96;
constexpr std::size_t kNc = 1024;

template <typename T>
constexpr std::size_t kNr = 2 * Vec<T>::lanes;

// Packs op(B)[pc:pc+kc, jc:jc+nc] into kNr-wide column panels, zero padded.
template <typename T>
void pack_b(Transpose tb, const T* b, std::size_t ldb, std::size_t pc, std::size_t kc, std::size_t jc, std::size_t nc,
            T* dst) {
  constexpr std::size_t nr = kNr<T>;
  for (std::size_t j0 = 0; j0 < nc; j0 += nr) {
    const std::size_t w = std::min(nr, nc - j0);
    for (std::size_t p = 0; p < kc; ++p) {
      for (std::size_t q = 0; q < w; ++q) {
        const std::size_t row = pc + p, col = jc + j0 + q;
        dst[q] = tb == Transpose::No ? b[row * ldb + col] : b[col * ldb + row];
      }
      for (std::size_t q = w; q < nr; ++q) dst[q] = T(0);
      dst += nr;
    }
  }
}

// Packs op(A)[ic:ic+mc, pc:pc+kc] into kMr-tall row panels, zero padded.
template <typename T>
void pack_a(Transpose ta, const T* a, std::size_t lda, std::size_t ic, std::size_t mc, std::size_t pc, std::size_t kc,
            T* dst) {
  for (std::size_t i0 = 0; i0 < mc; i0 += kMr) {
    const std::size_t h = std::min(kMr, mc - i0);
    for (std::size_t p = 0; p < kc; ++p) {
      for (std::size_t r = 0; r < h; ++r) {
        const std::size_t row = ic + i0 + r, col = pc + p;
        dst[r] = ta == Transpose::No ? a[row * lda + col] : a[col * lda + row];
      }
      for (std::size_t r = h; r < kMr; ++r) dst[r] = T(0);
      dst += kMr;
    }
  }
}

// 6 x (2 lanes) register tile. `accumulate` adds into C, otherwise overwrites.
template <typename T>
void micro_kernel(std::size_t kc, const T* ap, const T* bp, T* c, std::size_t ldc, std::size_t h, std::size_t w,
                  bool accumulate) {
  using V = Vec<T>;
  constexpr std::size_t lanes = V::lanes;
  typename V::reg acc[kMr][2];
  for (std::size_t r = 0; r < kMr; ++r) acc[r][0] = acc[r][1] = V::zero();
  for (std::size_t p = 0; p < kc; ++p) {
    const auto b0 = V::load(bp);
    const auto b1 = V::load(bp + lanes);
    for (std::size_t r = 0; r < kMr; ++r) {
      const auto av = V::set1(ap[r]);
      acc[r][0] = V::fmadd(av, b0, acc[r][0]);
      acc[r][1] = V::fmadd(av, b1, acc[r][1]);
    }
    ap += kMr;
    bp += 2 * lanes;
  }
  if (h == kMr && w == 2 * lanes) {
    for (std::size_t r = 0; r < kMr; ++r) {
      T* row = c + r * ldc;
      if (accumulate) {
        V::store(row, V::add(V::load(row), acc[r][0]));
        V::store(row + lanes, V::add(V::load(row + lanes), acc[r][1]));
      } else {
        V::store(row, acc[r][0]);
        V::store(row + lanes, acc[r][1]);
      }
    }
    return;
  }
  alignas(32) T tile[kMr][2 * lanes];
  for (std::size_t r = 0; r < kMr; ++r) {
    V::store(tile[r], acc[r][0]);
    V::store(tile[r] + lanes, acc[r][1]);
  }
  for (std::size_t r = 0; r < h; ++r)
    for (std::size_t q = 0; q < w; ++q) c[r * ldc + q] = accumulate ? c[r * ldc + q] + tile[r][q] : tile[r][q];
}

template <typename T>
void gemm_avx2(Transpose ta, Transpose tb, std::size_t m, std::size_t n, std::size_t k, const T* a, std::size_t lda,
               const T* b, std::size_t ldb, T beta, T* c, std::size_t ldc) {
  constexpr std::size_t nr = kNr<T>;
  if (m == 0 || n == 0) return;
  if (k == 0) {
    if (beta == T(0))
      for (std::size_t i = 0; i < m; ++i) std::fill(c + i * ldc, c + i * ldc + n, T(0));
    return;
  }
  thread_local std::vector<T> packed_a;
  thread_local std::vector<T> packed_b;
  packed_a.resize(((kMc + kMr - 1) / kMr) * kMr * kKc);
  packed_b.resize(((kNc + nr - 1) / nr) * nr * kKc);

  for (std::size_t jc = 0; jc < n; jc += kNc) {
    const std::size_t nc = std::min(kNc, n - jc);
    for (std::size_t pc = 0; pc < k; pc += kKc) {
      const std::size_t kc = std::min(kKc, k - pc);
      const bool accumulate = pc > 0 || beta != T(0);
      pack_b(tb, b, ldb, pc, kc, jc, nc, packed_b.data());
      for (std::size_t ic = 0; ic < m; ic += kMc) {
        const std::size_t mc = std::min(kMc, m - ic);
        pack_a(ta, a, lda, ic, mc, pc, kc, packed_a.data());
        for (std::size_t jr = 0; jr < nc; jr += nr) {
          const T* bp = packed_b.data() + (jr / nr) * nr * kc;
          for (std::size_t ir = 0; ir < mc; ir += kMr) {
            const T* ap = packed_a.data() + (ir / kMr) * kMr * kc;
            micro_kernel(kc, ap, bp, c + (ic + ir) * ldc + jc + jr, ldc, std::min(kMr, mc - ir),
                         std::min(nr, nc - jr), accumulate);
          }
        }
      }
    }
  }
}

// Same operation order as the scalar reference, so results are bit-identical.
template <typename T>
void adam_avx2(T* param, const T* grad, T* m, T* v, std::size_t n, const AdamCoeffs<T>& c) {
  using V = Vec<T>;
  constexpr std::size_t lanes = V::lanes;
  const T one_minus_b1 = T(1) - c.beta1;
  const T one_minus_b2 = T(1) - c.beta2;
  const auto b1 = V::set1(c.beta1), b2 = V::set1(c.beta2);
  const auto ob1 = V::set1(one_minus_b1), ob2 = V::set1(one_minus_b2);
  const auto c1 = V::set1(c.bias_correction1), c2 = V::set1(c.bias_correction2);
  const auto rate = V::set1(c.rate), eps = V::set1(c.epsilon);
  std::size_t i = 0;
  for (; i + lanes <= n; i += lanes) {
    const auto g = V::load(grad + i);
    const auto mi = V::add(V::mul(b1, V::load(m + i)), V::mul(ob1, g));
    const auto vi = V::add(V::mul(b2, V::load(v + i)), V::mul(ob2, V::mul(g, g)));
    V::store(m + i, mi);
    V::store(v + i, vi);
    const auto step = V::div(V::mul(rate, V::div(mi, c1)), V::add(V::sqrt(V::div(vi, c2)), eps));
    V::store(param + i, V::sub(V::load(param + i), step));
  }
  for (; i < n; ++i) {
    const T g = grad[i];
    m[i] = c.beta1 * m[i] + one_minus_b1 * g;
    v[i] = c.beta2 * v[i] + one_minus_b2 * (g * g);
    const T mhat = m[i] / c.bias_correction1;
    const T vhat = v[i] / c.bias_correction2;
    param[i] -= c.rate * mhat / (std::sqrt(vhat) + c.epsilon);
  }
}

}  // namespace

const KernelTable kAvx2Table{Backend::Avx2, &gemm_avx2<float>, &gemm_avx2<double>, &adam_avx2<float>,
                             &adam_avx2<double>};

}  // namespace afpc::simd::detail
