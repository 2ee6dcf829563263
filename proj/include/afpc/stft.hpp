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
#include <optional>
#include <span>
#include <vector>

#include "afpc/audio.hpp"

namespace afpc {

/// Frame size M, hop L. The transform size equals M and the window is a
/// periodic Hann window.
struct StftConfig {
  std::size_t frame_size = 512;
  std::size_t hop = 256;
  int sample_rate = 16000;

  std::size_t fft_size() const noexcept { return frame_size; }
  std::size_t bins() const noexcept { return frame_size / 2 + 1; }
  std::size_t frame_count(std::size_t signal_length) const noexcept;

  void validate() const;
  bool operator==(const StftConfig&) const = default;
};

/// frames x bins complex coefficients, frame-major.
struct ComplexSpectrogram {
  StftConfig config;
  std::size_t frames = 0;
  std::vector<std::complex<double>> data;

  std::size_t bins() const noexcept { return config.bins(); }
  std::span<std::complex<double>> frame(std::size_t k) { return {data.data() + k * bins(), bins()}; }
  std::span<const std::complex<double>> frame(std::size_t k) const { return {data.data() + k * bins(), bins()}; }
  std::complex<double>& at(std::size_t k, std::size_t f) { return data[k * bins() + f]; }
  const std::complex<double>& at(std::size_t k, std::size_t f) const { return data[k * bins() + f]; }
};

/// h[m] = 0.5 - 0.5 cos(2 pi m / M), m = 0..M-1.
std::vector<double> hann_periodic(std::size_t size);

/// y'[m] = y[m] - alpha * y[m-1], y[-1] = 0.
AudioBuffer preemphasis(const AudioBuffer& x, double alpha);

/// Frame k covers samples [kL, kL + M). Trailing samples that do not fill a
/// frame are dropped.
ComplexSpectrogram stft(const AudioBuffer& x, const StftConfig& cfg);

/// Weighted overlap-add synthesis with the analysis window, normalized by the
/// per-sample sum of squared windows. The natural output length is
/// (K-1)L + M; `length` truncates or zero-pads to a requested size.
AudioBuffer istft(const ComplexSpectrogram& spec, std::optional<std::size_t> length = std::nullopt);

/// Sum over frames of w[m - kL]^p for the synthesis positions of `frames` frames.
std::vector<double> overlap_window_sum(const StftConfig& cfg, std::size_t frames, int power);

}  // namespace afpc
