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

#include <atomic>
#include <cstdlib>

#include "afpc/error.hpp"
#include "simd/kernels_impl.hpp"

namespace afpc::simd {

std::string_view to_string(Backend backend) { return backend == Backend::Scalar ? "scalar" : "avx2"; }

std::optional<Backend> parse_backend(std::string_view name) {
  if (name == "scalar") return Backend::Scalar;
  if (name == "avx2") return Backend::Avx2;
  return std::nullopt;
}

bool backend_available(Backend backend) {
  switch (backend) {
    case Backend::Scalar: return true;
    case Backend::Avx2:
#if defined(AFPC_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Backend best_backend() { return backend_available(Backend::Avx2) ? Backend::Avx2 : Backend::Scalar; }

const KernelTable& kernels_for(Backend backend) {
  require(backend_available(backend), ErrorCode::InvalidArgument,
          "kernel backend " + std::string(to_string(backend)) + " is not available on this CPU");
#if defined(AFPC_HAVE_AVX2)
  if (backend == Backend::Avx2) return detail::kAvx2Table;
#endif
  return detail::kScalarTable;
}

namespace {

Backend initial_backend() {
  if (const char* env = std::getenv("AFPC_KERNELS")) {
    if (auto b = parse_backend(env); b && backend_available(*b)) return *b;
  }
  return best_backend();
}

std::atomic<const KernelTable*>& active_table() {
  static std::atomic<const KernelTable*> table{&kernels_for(initial_backend())};
  return table;
}

}  // namespace

const KernelTable& kernels() { return *active_table().load(std::memory_order_acquire); }
Backend active_backend() { return kernels().backend; }
void set_backend(Backend backend) { active_table().store(&kernels_for(backend), std::memory_order_release); }

}  // namespace afpc::simd
