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

#include "afpc/feature_cache.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "afpc/error.hpp"

namespace afpc {

namespace fs = std::filesystem;

namespace {

static_assert(std::endian::native == std::endian::little, "cache I/O assumes a little-endian host");
static_assert(sizeof(float) == 4);

constexpr std::size_t kHeaderBytes = 4 + 4 + 1 + 4 + 4;

void append(std::vector<char>& out, const void* src, std::size_t n) {
  const char* p = static_cast<const char*>(src);
  out.insert(out.end(), p, p + n);
}

std::vector<char> header_bytes(const char* magic, FeatureSet set, std::size_t frames, std::size_t dim) {
  std::vector<char> out;
  append(out, magic, 4);
  const std::uint32_t version = kCacheVersion;
  const auto id = static_cast<std::uint8_t>(set);
  const auto k = static_cast<std::uint32_t>(frames);
  const auto d = static_cast<std::uint32_t>(dim);
  append(out, &version, 4);
  append(out, &id, 1);
  append(out, &k, 4);
  append(out, &d, 4);
  return out;
}

void write_all(const fs::path& path, const std::vector<char>& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) fail(ErrorCode::IoFailure, "cannot create " + path.string());
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) fail(ErrorCode::IoFailure, "write error on " + path.string());
}

std::vector<char> read_all(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::IoFailure, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

CacheHeader parse_header(const std::vector<char>& bytes, const fs::path& path) {
  if (bytes.size() < kHeaderBytes) fail(ErrorCode::MalformedHeader, "truncated cache header in " + path.string());
  CacheHeader h;
  std::memcpy(h.magic, bytes.data(), 4);
  std::memcpy(&h.version, bytes.data() + 4, 4);
  std::uint8_t id = 0;
  std::memcpy(&id, bytes.data() + 8, 1);
  if (id > static_cast<std::uint8_t>(FeatureSet::MfccNssc))
    fail(ErrorCode::MalformedHeader, "unknown feature-set id in " + path.string());
  h.feature_set = static_cast<FeatureSet>(id);
  std::memcpy(&h.frames, bytes.data() + 9, 4);
  std::memcpy(&h.dimension, bytes.data() + 13, 4);
  if (h.version != kCacheVersion)
    fail(ErrorCode::VersionMismatch, "cache version " + std::to_string(h.version) + " in " + path.string());
  return h;
}

std::vector<char> checked_payload(const fs::path& path, const char* magic, std::size_t floats_per_frame_factor,
                                  CacheHeader& h) {
  auto bytes = read_all(path);
  h = parse_header(bytes, path);
  if (std::memcmp(h.magic, magic, 4) != 0)
    fail(ErrorCode::MalformedHeader, "expected " + std::string(magic, 4) + " cache in " + path.string());
  const std::size_t expected =
      kHeaderBytes + std::size_t(h.frames) * h.dimension * floats_per_frame_factor * sizeof(float);
  if (bytes.size() != expected) fail(ErrorCode::MalformedHeader, "payload size mismatch in " + path.string());
  return bytes;
}

void write_real_cache(const fs::path& path, const char* magic, FeatureSet set, const Matrix<double>& values) {
  auto bytes = header_bytes(magic, set, values.rows, values.cols);
  bytes.reserve(bytes.size() + values.size() * sizeof(float));
  for (double v : values.data) {
    const auto f = static_cast<float>(v);
    append(bytes, &f, sizeof f);
  }
  write_all(path, bytes);
}

Matrix<float> read_real_cache(const fs::path& path, const char* magic, FeatureSet* set) {
  CacheHeader h;
  const auto bytes = checked_payload(path, magic, 1, h);
  Matrix<float> m(h.frames, h.dimension);
  std::memcpy(m.data.data(), bytes.data() + kHeaderBytes, m.size() * sizeof(float));
  if (set) *set = h.feature_set;
  return m;
}

}  // namespace

CacheHeader read_cache_header(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::IoFailure, "cannot open " + path.string());
  std::vector<char> bytes(kHeaderBytes);
  f.read(bytes.data(), static_cast<std::streamsize>(kHeaderBytes));
  bytes.resize(static_cast<std::size_t>(f.gcount()));
  return parse_header(bytes, path);
}

void write_feature_cache(const fs::path& path, FeatureSet set, const Matrix<double>& values) {
  write_real_cache(path, "AFPC", set, values);
}

Matrix<float> read_feature_cache(const fs::path& path, FeatureSet* set) { return read_real_cache(path, "AFPC", set); }

void write_mask_cache(const fs::path& path, FeatureSet set, const Matrix<double>& mask) {
  write_real_cache(path, "IRMT", set, mask);
}

Matrix<float> read_mask_cache(const fs::path& path, FeatureSet* set) { return read_real_cache(path, "IRMT", set); }

void write_spectrogram_cache(const fs::path& path, FeatureSet set, const ComplexSpectrogram& spec) {
  auto bytes = header_bytes("SPEC", set, spec.frames, spec.bins());
  for (const auto& c : spec.data) {
    const float re = static_cast<float>(c.real());
    const float im = static_cast<float>(c.imag());
    append(bytes, &re, sizeof re);
    append(bytes, &im, sizeof im);
  }
  write_all(path, bytes);
}

Matrix<std::complex<float>> read_spectrogram_cache(const fs::path& path, FeatureSet* set) {
  CacheHeader h;
  const auto bytes = checked_payload(path, "SPEC", 2, h);
  Matrix<std::complex<float>> m(h.frames, h.dimension);
  const char* p = bytes.data() + kHeaderBytes;
  for (auto& c : m.data) {
    float re = 0, im = 0;
    std::memcpy(&re, p, 4);
    std::memcpy(&im, p + 4, 4);
    c = {re, im};
    p += 8;
  }
  if (set) *set = h.feature_set;
  return m;
}

}  // namespace afpc
