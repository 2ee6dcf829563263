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

#include "afpc/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "afpc/error.hpp"

namespace afpc {

std::string_view to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::White: return "white";
    case NoiseKind::PinkLike: return "pink_like";
    case NoiseKind::BabbleLike: return "babble_like";
    case NoiseKind::File: return "file";
  }
  return "file";
}

std::optional<NoiseKind> parse_noise_kind(std::string_view name) {
  if (name == "white") return NoiseKind::White;
  if (name == "pink_like" || name == "pink") return NoiseKind::PinkLike;
  if (name == "babble_like" || name == "babble") return NoiseKind::BabbleLike;
  return std::nullopt;
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void add_voiced_segment(std::vector<double>& out, std::size_t begin, std::size_t length, int rate,
                        std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const int harmonics = 3 + static_cast<int>(uni(rng) * 3.0) % 3;
  const double f0_start = 100.0 + 200.0 * uni(rng);
  const double f0_end = 100.0 + 200.0 * uni(rng);
  const double vibrato_hz = 3.0 + 3.0 * uni(rng);
  const double am_hz = 2.0 + 6.0 * uni(rng);
  const double am_phase = kTwoPi * uni(rng);
  std::vector<double> harmonic_gain(harmonics);
  std::vector<double> phase(harmonics);
  for (int h = 0; h < harmonics; ++h) {
    harmonic_gain[h] = (0.6 + 0.4 * uni(rng)) / (h + 1);
    phase[h] = kTwoPi * uni(rng);
  }
  const std::size_t ramp = std::min<std::size_t>(length / 4, static_cast<std::size_t>(0.01 * rate));
  for (std::size_t i = 0; i < length; ++i) {
    const double t = static_cast<double>(i) / rate;
    const double u = static_cast<double>(i) / static_cast<double>(length);
    double f0 = f0_start + (f0_end - f0_start) * u + 8.0 * std::sin(kTwoPi * vibrato_hz * t);
    f0 = std::clamp(f0, 100.0, 300.0);
    double sample = 0.0;
    for (int h = 0; h < harmonics; ++h) {
      phase[h] += kTwoPi * f0 * (h + 1) / rate;
      if (phase[h] > kTwoPi) phase[h] -= kTwoPi;
      sample += harmonic_gain[h] * std::sin(phase[h]);
    }
    const double am = 0.55 + 0.45 * std::sin(kTwoPi * am_hz * t + am_phase);
    double env = 1.0;
    if (ramp > 0) {
      if (i < ramp) env = static_cast<double>(i) / ramp;
      if (length - 1 - i < ramp) env = std::min(env, static_cast<double>(length - 1 - i) / ramp);
    }
    out[begin + i] += am * env * sample;
  }
}

void normalize_rms(std::vector<double>& x, double target_rms) {
  const double rms = std::sqrt(energy(x) / std::max<std::size_t>(1, x.size()));
  if (rms > 0.0)
    for (double& v : x) v *= target_rms / rms;
}

}  // namespace

AudioBuffer synth_speech_like(std::uint64_t seed, double duration_s, int sample_rate) {
  require(duration_s > 0.0 && sample_rate > 0, ErrorCode::InvalidArgument, "bad synthetic utterance request");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const auto total = static_cast<std::size_t>(duration_s * sample_rate);
  AudioBuffer buf;
  buf.sample_rate = sample_rate;
  buf.samples.assign(total, 0.0);

  std::size_t pos = static_cast<std::size_t>((0.05 + 0.15 * uni(rng)) * sample_rate);
  while (pos < total) {
    const auto voiced = static_cast<std::size_t>((0.3 + 0.9 * uni(rng)) * sample_rate);
    const std::size_t len = std::min(voiced, total - pos);
    if (len > 16) add_voiced_segment(buf.samples, pos, len, sample_rate, rng);
    pos += len;
    pos += static_cast<std::size_t>((0.1 + 0.3 * uni(rng)) * sample_rate);
  }
  normalize_rms(buf.samples, 0.05);
  return buf;
}

AudioBuffer synth_noise(NoiseKind kind, std::uint64_t seed, std::size_t length, int sample_rate) {
  AudioBuffer buf;
  buf.sample_rate = sample_rate;
  buf.samples.assign(length, 0.0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  switch (kind) {
    case NoiseKind::White:
      for (double& v : buf.samples) v = gauss(rng);
      break;
    case NoiseKind::PinkLike: {
      // Paul Kellet's refined pinking filter on white noise.
      double b0 = 0, b1 = 0, b2 = 0, b3 = 0, b4 = 0, b5 = 0, b6 = 0;
      for (double& v : buf.samples) {
        const double w = gauss(rng);
        b0 = 0.99886 * b0 + w * 0.0555179;
        b1 = 0.99332 * b1 + w * 0.0750759;
        b2 = 0.96900 * b2 + w * 0.1538520;
        b3 = 0.86650 * b3 + w * 0.3104856;
        b4 = 0.55000 * b4 + w * 0.5329522;
        b5 = -0.7616 * b5 - w * 0.0168980;
        v = b0 + b1 + b2 + b3 + b4 + b5 + b6 + w * 0.5362;
        b6 = w * 0.115926;
      }
      break;
    }
    case NoiseKind::BabbleLike: {
      constexpr int kTalkers = 6;
      const double duration = static_cast<double>(length) / sample_rate + 1.0 / sample_rate;
      for (int t = 0; t < kTalkers; ++t) {
        const AudioBuffer talker = synth_speech_like(rng(), duration, sample_rate);
        for (std::size_t i = 0; i < length && i < talker.size(); ++i) buf.samples[i] += talker.samples[i];
      }
      break;
    }
    case NoiseKind::File:
      fail(ErrorCode::InvalidArgument, "file noise cannot be synthesized");
  }
  normalize_rms(buf.samples, 0.05);
  return buf;
}

}  // namespace afpc
