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

#include <filesystem>
#include <fstream>

#include "afpc/error.hpp"
#include "afpc/feature_cache.hpp"
#include "afpc/features.hpp"
#include "unit/oracles.hpp"

namespace fs = std::filesystem;
using namespace afpc;

namespace {

fs::path dir() {
  static const fs::path p = [] {
    fs::path d = fs::temp_directory_path() / "afpc_test_cache";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return p;
}

}  // namespace

TEST(FeatureCache, RoundTripPreservesFloat32ValuesAndOrder) {
  AudioBuffer x;
  x.samples = oracle::random_signal(2, 8000);
  FeatureConfig cfg;
  const auto ex = extract_features(x, cfg, StftConfig{});
  write_feature_cache(dir() / "a.afpc", cfg.feature_set, ex.context.values);
  FeatureSet set{};
  const Matrix<float> back = read_feature_cache(dir() / "a.afpc", &set);
  EXPECT_EQ(set, FeatureSet::MfccNssc);
  ASSERT_EQ(back.rows, ex.context.values.rows);
  ASSERT_EQ(back.cols, 396u);
  for (std::size_t i = 0; i < back.size(); ++i) ASSERT_EQ(back.data[i], static_cast<float>(ex.context.values.data[i]));

  // A second write of the reloaded values is byte-identical.
  Matrix<double> widened(back.rows, back.cols);
  for (std::size_t i = 0; i < back.size(); ++i) widened.data[i] = back.data[i];
  write_feature_cache(dir() / "b.afpc", cfg.feature_set, widened);
  std::ifstream fa(dir() / "a.afpc", std::ios::binary), fb(dir() / "b.afpc", std::ios::binary);
  const std::string sa{std::istreambuf_iterator<char>(fa), {}}, sb{std::istreambuf_iterator<char>(fb), {}};
  EXPECT_EQ(sa, sb);
  EXPECT_EQ(sa.size(), 17u + back.size() * 4u);
  EXPECT_EQ(sa.substr(0, 4), "AFPC");
}

TEST(FeatureCache, SpectrogramAndMaskRoundTrip) {
  AudioBuffer x;
  x.samples = oracle::random_signal(3, 4000);
  const auto spec = stft(x, StftConfig{});
  write_spectrogram_cache(dir() / "s.spec", FeatureSet::Stft, spec);
  const auto back = read_spectrogram_cache(dir() / "s.spec");
  ASSERT_EQ(back.rows, spec.frames);
  ASSERT_EQ(back.cols, 257u);
  for (std::size_t i = 0; i < back.size(); ++i) {
    ASSERT_EQ(back.data[i].real(), static_cast<float>(spec.data[i].real()));
    ASSERT_EQ(back.data[i].imag(), static_cast<float>(spec.data[i].imag()));
  }
  Matrix<double> mask(3, 257, 0.25);
  write_mask_cache(dir() / "m.irm", FeatureSet::Stft, mask);
  EXPECT_EQ(read_mask_cache(dir() / "m.irm").data, std::vector<float>(3 * 257, 0.25f));
  EXPECT_EQ(read_cache_header(dir() / "m.irm").frames, 3u);
}

TEST(FeatureCache, RejectsWrongMagicVersionAndSize) {
  Matrix<double> m(2, 4, 1.0);
  write_feature_cache(dir() / "c.afpc", FeatureSet::Mfcc, m);
  auto expect_code = [](const fs::path& p, ErrorCode code) {
    try {
      read_feature_cache(p);
      ADD_FAILURE() << "accepted " << p;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), code) << e.what();
    }
  };
  write_mask_cache(dir() / "c.irm", FeatureSet::Mfcc, m);
  expect_code(dir() / "c.irm", ErrorCode::MalformedHeader);

  std::string bytes;
  {
    std::ifstream f(dir() / "c.afpc", std::ios::binary);
    bytes.assign(std::istreambuf_iterator<char>(f), {});
  }
  auto write = [&](const std::string& b) {
    std::ofstream f(dir() / "d.afpc", std::ios::binary | std::ios::trunc);
    f << b;
  };
  std::string v2 = bytes;
  v2[4] = 2;
  write(v2);
  expect_code(dir() / "d.afpc", ErrorCode::VersionMismatch);
  write(bytes.substr(0, bytes.size() - 1));
  expect_code(dir() / "d.afpc", ErrorCode::MalformedHeader);
  write(bytes.substr(0, 10));
  expect_code(dir() / "d.afpc", ErrorCode::MalformedHeader);
}
