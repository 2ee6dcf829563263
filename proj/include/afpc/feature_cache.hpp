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

#include <complex>
#include <cstdint>
#include <filesystem>

#include "afpc/features.hpp"
#include "afpc/matrix.hpp"
#include "afpc/stft.hpp"

namespace afpc {

// Binary caches share one header: 4-byte magic, u32 version, u8 feature-set
// id, u32 frame count, u32 dimension (all little-endian), followed by
// frame-major IEEE-754 float32 payload.
//
//   "AFPC"  feature vectors, dimension values per frame
//   "SPEC"  complex spectrogram, dimension bins per frame, interleaved re/im
//   "IRMT"  ratio-mask targets, dimension bins per frame

inline constexpr std::uint32_t kCacheVersion = 1;

struct CacheHeader {
  char magic[4] = {};
  std::uint32_t version = kCacheVersion;
  FeatureSet feature_set = FeatureSet::MfccNssc;
  std::uint32_t frames = 0;
  std::uint32_t dimension = 0;
};

void write_feature_cache(const std::filesystem::path& path, FeatureSet set, const Matrix<double>& values);
Matrix<float> read_feature_cache(const std::filesystem::path& path, FeatureSet* set = nullptr);

void write_mask_cache(const std::filesystem::path& path, FeatureSet set, const Matrix<double>& mask);
Matrix<float> read_mask_cache(const std::filesystem::path& path, FeatureSet* set = nullptr);

void write_spectrogram_cache(const std::filesystem::path& path, FeatureSet set, const ComplexSpectrogram& spec);
Matrix<std::complex<float>> read_spectrogram_cache(const std::filesystem::path& path, FeatureSet* set = nullptr);

CacheHeader read_cache_header(const std::filesystem::path& path);

}  // namespace afpc
