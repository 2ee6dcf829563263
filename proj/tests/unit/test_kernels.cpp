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
#include <limits>
#include <random>
#include <tuple>

#include "afpc/error.hpp"
#include "afpc/simd/kernels.hpp"

using namespace afpc::simd;

namespace {

template <typename T>
std::vector<T> random_vec(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<T> v(n);
  for (auto& x : v) x = static_cast<T>(u(rng));
  return v;
}

struct Shape {
  std::size_t m, n, k;
};

// op(A)(i, p) and op(B)(p, j) under row-major storage with leading dimensions.
template <typename T>
T op_at(const std::vector<T>& x, Transpose t, std::size_t r, std::size_t c, std::size_t ld) {
  return t == Transpose::No ? x[r * ld + c] : x[c * ld + r];
}

template <typename T>
void check_backend_against_reference(Backend backend) {
  const KernelTable& table = kernels_for(backend);
  const auto gemm_fn = [&] {
    if constexpr (std::is_same_v<T, float>) return table.gemm_f32;
    else return table.gemm_f64;
  }();
  const double eps = std::numeric_limits<T>::epsilon();
  const Shape shapes[] = {{1, 1, 1},   {6, 16, 8},   {7, 17, 9},   {13, 5, 300},
                          {100, 33, 70}, {2, 1030, 5}, {128, 257, 64}, {97, 3, 513}};
  std::uint64_t seed = 1;
  for (const auto& s : shapes)
    for (Transpose ta : {Transpose::No, Transpose::Yes})
      for (Transpose tb : {Transpose::No, Transpose::Yes})
        for (T beta : {T(0), T(1)}) {
          // Leading dimensions are padded to exercise strided access.
          const std::size_t lda = (ta == Transpose::No ? s.k : s.m) + 3;
          const std::size_t ldb = (tb == Transpose::No ? s.n : s.k) + 1;
          const std::size_t ldc = s.n + 2;
          const auto a = random_vec<T>((ta == Transpose::No ? s.m : s.k) * lda, seed++);
          const auto b = random_vec<T>((tb == Transpose::No ? s.k : s.n) * ldb, seed++);
          auto c = random_vec<T>(s.m * ldc, seed++);
          const auto c0 = c;
          gemm_fn(ta, tb, s.m, s.n, s.k, a.data(), lda, b.data(), ldb, beta, c.data(), ldc);
          for (std::size_t i = 0; i < s.m; ++i)
            for (std::size_t j = 0; j < s.n; ++j) {
              long double ref = beta == T(1) ? c0[i * ldc + j] : 0.0L;
              long double mag = std::fabs(ref);
              for (std::size_t p = 0; p < s.k; ++p) {
                const long double t = static_cast<long double>(op_at(a, ta, i, p, lda)) * op_at(b, tb, p, j, ldb);
                ref += t;
                mag += std::fabs(t);
              }
              const double bound = 2.0 * static_cast<double>(s.k + 1) * eps * static_cast<double>(mag);
              ASSERT_LE(std::fabs(static_cast<long double>(c[i * ldc + j]) - ref), bound)
                  << to_string(backend) << " m=" << s.m << " n=" << s.n << " k=" << s.k << " ta=" << int(ta)
                  << " tb=" << int(tb) << " beta=" << beta << " at " << i << "," << j;
            }
          // Padding columns of C are never written.
          for (std::size_t i = 0; i < s.m; ++i)
            for (std::size_t j = s.n; j < ldc; ++j) ASSERT_EQ(c[i * ldc + j], c0[i * ldc + j]);
        }
}

template <typename T>
void check_adam_bit_equal() {
  const KernelTable& scalar = kernels_for(Backend::Scalar);
  const KernelTable& simd = kernels_for(Backend::Avx2);
  for (std::size_t n : {1u, 7u, 8u, 9u, 33u, 1000u}) {
    auto p1 = random_vec<T>(n, 10 + n), g = random_vec<T>(n, 20 + n);
    auto m1 = random_vec<T>(n, 30 + n), v1 = random_vec<T>(n, 40 + n);
    for (auto& x : v1) x = std::fabs(x);
    auto p2 = p1, m2 = m1, v2 = v1;
    const AdamCoeffs<T> c{T(1e-3), T(0.9), T(0.999), T(1e-8), T(1 - 0.9 * 0.9), T(1 - 0.999 * 0.999)};
    if constexpr (std::is_same_v<T, float>) {
      scalar.adam_f32(p1.data(), g.data(), m1.data(), v1.data(), n, c);
      simd.adam_f32(p2.data(), g.data(), m2.data(), v2.data(), n, c);
    } else {
      scalar.adam_f64(p1.data(), g.data(), m1.data(), v1.data(), n, c);
      simd.adam_f64(p2.data(), g.data(), m2.data(), v2.data(), n, c);
    }
    EXPECT_EQ(p1, p2) << n;
    EXPECT_EQ(m1, m2) << n;
    EXPECT_EQ(v1, v2) << n;
  }
}

}  // namespace

TEST(Kernels, ScalarGemmMatchesReference) {
  check_backend_against_reference<float>(Backend::Scalar);
  check_backend_against_reference<double>(Backend::Scalar);
}

TEST(Kernels, Avx2GemmMatchesReference) {
  if (!backend_available(Backend::Avx2)) GTEST_SKIP() << "AVX2/FMA not available on this CPU";
  check_backend_against_reference<float>(Backend::Avx2);
  check_backend_against_reference<double>(Backend::Avx2);
}

TEST(Kernels, Avx2GemmAgreesWithScalar) {
  if (!backend_available(Backend::Avx2)) GTEST_SKIP() << "AVX2/FMA not available on this CPU";
  const auto a = random_vec<float>(64 * 411, 1), b = random_vec<float>(512 * 411, 2);
  std::vector<float> c1(64 * 512), c2(64 * 512);
  kernels_for(Backend::Scalar).gemm_f32(Transpose::No, Transpose::Yes, 64, 512, 411, a.data(), 411, b.data(), 411,
                                        0.0f, c1.data(), 512);
  kernels_for(Backend::Avx2).gemm_f32(Transpose::No, Transpose::Yes, 64, 512, 411, a.data(), 411, b.data(), 411,
                                      0.0f, c2.data(), 512);
  double worst = 0.0;
  for (std::size_t i = 0; i < c1.size(); ++i) worst = std::max(worst, double(std::fabs(c1[i] - c2[i])));
  EXPECT_LT(worst, 1e-4);
}

TEST(Kernels, AdamBackendsAreBitIdentical) {
  if (!backend_available(Backend::Avx2)) GTEST_SKIP() << "AVX2/FMA not available on this CPU";
  check_adam_bit_equal<float>();
  check_adam_bit_equal<double>();
}

TEST(Kernels, ZeroSizedProductsLeaveOrClearC) {
  for (Backend be : {Backend::Scalar, Backend::Avx2}) {
    if (!backend_available(be)) continue;
    std::vector<double> c(6, 5.0);
    kernels_for(be).gemm_f64(Transpose::No, Transpose::No, 2, 3, 0, nullptr, 1, nullptr, 3, 1.0, c.data(), 3);
    EXPECT_EQ(c, std::vector<double>(6, 5.0));
    kernels_for(be).gemm_f64(Transpose::No, Transpose::No, 2, 3, 0, nullptr, 1, nullptr, 3, 0.0, c.data(), 3);
    EXPECT_EQ(c, std::vector<double>(6, 0.0));
  }
}

TEST(Kernels, BackendSelection) {
  EXPECT_TRUE(backend_available(Backend::Scalar));
  EXPECT_EQ(parse_backend("scalar"), Backend::Scalar);
  EXPECT_EQ(parse_backend("avx2"), Backend::Avx2);
  EXPECT_FALSE(parse_backend("neon"));
  const Backend before = active_backend();
  set_backend(Backend::Scalar);
  EXPECT_EQ(active_backend(), Backend::Scalar);
  EXPECT_EQ(kernels().backend, Backend::Scalar);
  set_backend(before);
  if (!backend_available(Backend::Avx2)) EXPECT_THROW(kernels_for(Backend::Avx2), afpc::Error);
}
