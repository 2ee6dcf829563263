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
#include <functional>
#include <numbers>
#include <random>

#include "afpc/error.hpp"
#include "afpc/metrics.hpp"
#include "afpc/synth.hpp"
#include "unit/oracles.hpp"

using namespace afpc;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected afpc::Error";
  return ErrorCode::InvalidArgument;
}

AudioBuffer buffer(std::vector<double> v, int rate = 16000) {
  AudioBuffer b;
  b.samples = std::move(v);
  b.sample_rate = rate;
  return b;
}

// Closed-form test signals shared with the external reference run
// (frozen values below came from pystoi 0.4.1 at fs = 10 kHz).
std::vector<double> reference_speechlike(std::size_t n, int fs) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / fs;
    const double gate = std::fmod(t, 1.0) < 0.7 ? 1.0 : 0.0;
    x[i] = gate * (std::sin(2 * std::numbers::pi * 220 * t) * (0.5 + 0.5 * std::sin(2 * std::numbers::pi * 3 * t)) +
                   0.3 * std::sin(2 * std::numbers::pi * 1250 * t) * (0.5 + 0.5 * std::cos(2 * std::numbers::pi * 5 * t)));
  }
  return x;
}

std::vector<double> reference_disturbance(std::size_t n) {
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double k = static_cast<double>(i);
    d[i] = std::sin(0.7 * k + 0.0013 * k * k);
  }
  return d;
}

}  // namespace

TEST(Sdr, ForcedArithmetic) {
  EXPECT_EQ(sdr(buffer({1, 0}), buffer({1, 0})), kSdrSentinelDb);
  EXPECT_NEAR(sdr(buffer({1, 0}), buffer({0.5, 0})), 10 * std::log10(4.0), 1e-12);
  EXPECT_NEAR(sdr(buffer({1, 0}), buffer({0.5, 0})), 6.0206, 1e-4);
  EXPECT_NEAR(sdr(buffer({0.3, -0.2, 0.1}), buffer({0, 0, 0})), 0.0, 1e-12);
}

TEST(Sdr, IsNotScaleInvariant) {
  const auto s = buffer(oracle::random_signal(1, 1000));
  AudioBuffer scaled = s;
  for (auto& v : scaled.samples) v *= 0.5;
  const double d = sdr(s, scaled);
  EXPECT_TRUE(std::isfinite(d));
  EXPECT_NEAR(d, 10 * std::log10(1.0 / 0.25), 1e-9);
}

TEST(Sdr, Errors) {
  EXPECT_EQ(code_of([] { sdr(buffer({1, 2}), buffer({1})); }), ErrorCode::LengthMismatch);
  EXPECT_EQ(code_of([] { sdr(buffer({0, 0}), buffer({1, 1})); }), ErrorCode::ZeroReference);
}

TEST(Stoi, SelfSimilarityAndIndependentNoise) {
  const AudioBuffer s = synth_speech_like(3, 4.0);
  EXPECT_GE(stoi(s, s), 0.999);
  const AudioBuffer n = synth_noise(NoiseKind::White, 4, s.size());
  EXPECT_LT(stoi(s, n), 0.3);
}

TEST(Stoi, MonotoneInSnr) {
  const AudioBuffer s = synth_speech_like(5, 4.0);
  const AudioBuffer n = synth_noise(NoiseKind::White, 6, s.size());
  double prev = 2.0;
  for (double snr : {10.0, 5.0, 0.0, -5.0}) {
    const double v = stoi(s, mix_at_snr(s, n, snr).noisy);
    EXPECT_LE(v, prev) << snr;
    prev = v;
  }
  EXPECT_GE(stoi(s, mix_at_snr(s, n, 10.0).noisy), stoi(s, mix_at_snr(s, n, -5.0).noisy));
}

TEST(Stoi, GainInvariance) {
  const AudioBuffer s = synth_speech_like(7, 3.0);
  const AudioBuffer n = synth_noise(NoiseKind::BabbleLike, 8, s.size());
  const AudioBuffer y = mix_at_snr(s, n, 0.0).noisy;
  const double base = stoi(s, y);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> log_gain(std::log(0.1), std::log(10.0));
  for (int i = 0; i < 5; ++i) {
    AudioBuffer g = y;
    const double c = std::exp(log_gain(rng));
    for (auto& v : g.samples) v *= c;
    EXPECT_NEAR(stoi(s, g), base, 1e-6) << c;
  }
}

TEST(Stoi, Errors) {
  const AudioBuffer s = synth_speech_like(1, 0.2);
  EXPECT_EQ(code_of([&] { stoi(s, s); }), ErrorCode::TooShort);
  const AudioBuffer long_s = synth_speech_like(1, 2.0);
  AudioBuffer cut = long_s;
  cut.samples.pop_back();
  EXPECT_EQ(code_of([&] { stoi(long_s, cut); }), ErrorCode::LengthMismatch);
}

TEST(Stoi, MatchesReferenceImplementationAt10kHz) {
  const std::size_t n = 30000;
  const auto x = reference_speechlike(n, 10000);
  const auto d = reference_disturbance(n);
  std::vector<double> y1(n), y2(n);
  for (std::size_t i = 0; i < n; ++i) {
    y1[i] = x[i] + 0.5 * d[i];
    y2[i] = x[i] + 2.0 * d[i];
  }
  EXPECT_NEAR(stoi(buffer(x, 10000), buffer(y1, 10000)), 0.4613443902094228, 1e-6);
  EXPECT_NEAR(stoi(buffer(x, 10000), buffer(y2, 10000)), 0.3313680191775745, 1e-6);
}

TEST(Resample, PreservesInBandToneAndLength) {
  std::vector<double> x(16000);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(2 * std::numbers::pi * 1000.0 * i / 16000.0);
  const auto y = resample(x, 16000, 10000);
  ASSERT_EQ(y.size(), 10000u);
  for (std::size_t i = 100; i + 100 < y.size(); ++i)
    ASSERT_NEAR(y[i], std::sin(2 * std::numbers::pi * 1000.0 * i / 10000.0), 2e-3) << i;
  EXPECT_EQ(resample(x, 16000, 16000), x);
}
