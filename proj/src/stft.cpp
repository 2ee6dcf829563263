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

#include "afpc/stft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "afpc/error.hpp"
#include "afpc/fft.hpp"

namespace afpc {

std::size_t StftConfig::frame_count(std::size_t signal_length) const noexcept {
  if (signal_length < frame_size || hop == 0) return 0;
  return (signal_length - frame_size) / hop + 1;
}

void StftConfig::validate() const {
  require(frame_size >= 2 && frame_size % 2 == 0, ErrorCode::InvalidArgument, "frame size must be even");
  require(is_power_of_two(frame_size), ErrorCode::InvalidArgument, "frame size must be a power of two");
  require(hop > 0 && hop <= frame_size, ErrorCode::InvalidArgument, "hop must satisfy 0 < L <= M");
  require(sample_rate > 0, ErrorCode::InvalidArgument, "sample rate must be positive");
}

std::vector<double> hann_periodic(std::size_t size) {
  std::vector<double> w(size);
  for (std::size_t m = 0; m < size; ++m)
    w[m] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(size));
  return w;
}

AudioBuffer preemphasis(const AudioBuffer& x, double alpha) {
  require(alpha >= 0.0 && alpha <= 1.0, ErrorCode::InvalidArgument, "pre-emphasis alpha must lie in [0, 1]");
  validate(x);
  AudioBuffer y;
  y.sample_rate = x.sample_rate;
  y.samples.resize(x.size());
  double prev = 0.0;
  for (std::size_t m = 0; m < x.size(); ++m) {
    y.samples[m] = x.samples[m] - alpha * prev;
    prev = x.samples[m];
  }
  return y;
}

ComplexSpectrogram stft(const AudioBuffer& x, const StftConfig& cfg) {
  cfg.validate();
  require(x.sample_rate == cfg.sample_rate, ErrorCode::SampleRateMismatch,
          "signal at " + std::to_string(x.sample_rate) + " Hz, STFT configured for " +
              std::to_string(cfg.sample_rate) + " Hz");
  if (x.size() < cfg.frame_size)
    fail(ErrorCode::InputTooShort, "signal of " + std::to_string(x.size()) + " samples is shorter than one frame");

  const std::size_t m = cfg.frame_size;
  const auto window = hann_periodic(m);
  const Fft fft(m);
  ComplexSpectrogram spec;
  spec.config = cfg;
  spec.frames = cfg.frame_count(x.size());
  spec.data.resize(spec.frames * cfg.bins());
  std::vector<double> frame(m);
  for (std::size_t k = 0; k < spec.frames; ++k) {
    const double* src = x.samples.data() + k * cfg.hop;
    for (std::size_t i = 0; i < m; ++i) frame[i] = src[i] * window[i];
    fft.forward_real(frame, spec.frame(k));
  }
  return spec;
}

std::vector<double> overlap_window_sum(const StftConfig& cfg, std::size_t frames, int power) {
  const auto window = hann_periodic(cfg.frame_size);
  const std::size_t length = frames == 0 ? 0 : (frames - 1) * cfg.hop + cfg.frame_size;
  std::vector<double> sum(length, 0.0);
  for (std::size_t k = 0; k < frames; ++k)
    for (std::size_t i = 0; i < cfg.frame_size; ++i) sum[k * cfg.hop + i] += std::pow(window[i], power);
  return sum;
}

AudioBuffer istft(const ComplexSpectrogram& spec, std::optional<std::size_t> length) {
  const StftConfig& cfg = spec.config;
  cfg.validate();
  require(spec.data.size() == spec.frames * cfg.bins(), ErrorCode::ShapeMismatch, "spectrogram data size mismatch");

  const std::size_t m = cfg.frame_size;
  const auto window = hann_periodic(m);
  const Fft fft(m);
  const std::size_t natural = spec.frames == 0 ? 0 : (spec.frames - 1) * cfg.hop + m;
  std::vector<double> out(natural, 0.0);
  std::vector<double> norm(natural, 0.0);
  std::vector<double> frame(m);
  for (std::size_t k = 0; k < spec.frames; ++k) {
    fft.inverse_real(spec.frame(k), frame);
    double* dst = out.data() + k * cfg.hop;
    double* nrm = norm.data() + k * cfg.hop;
    for (std::size_t i = 0; i < m; ++i) {
      dst[i] += frame[i] * window[i];
      nrm[i] += window[i] * window[i];
    }
  }
  // Near the ends only one frame contributes and w^2 falls to zero, so a
  // modified frame would be amplified by up to 1/w there. The divisor is
  // floored at the smallest steady-state window-square sum, which leaves the
  // interior untouched and tapers the edges instead.
  double floor = 0.0;
  for (std::size_t i = 0; i < cfg.hop; ++i) {
    double sum = 0.0;
    for (std::size_t j = i; j < m; j += cfg.hop) sum += window[j] * window[j];
    floor = i == 0 ? sum : std::min(floor, sum);
  }
  for (std::size_t i = 0; i < natural; ++i) out[i] /= std::max(norm[i], floor);

  AudioBuffer buf;
  buf.sample_rate = cfg.sample_rate;
  buf.samples = std::move(out);
  if (length) buf.samples.resize(*length, 0.0);
  return buf;
}

}  // namespace afpc
