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

#include <optional>
#include <string>
#include <vector>

#include "afpc/audio.hpp"

namespace afpc {

/// Returned by sdr() when the error energy is negligible.
inline constexpr double kSdrSentinelDb = 200.0;

/// Plain energy-ratio SDR, 10 log10(sum s^2 / sum (s - s_hat)^2). Not scale-invariant.
double sdr(const AudioBuffer& reference, const AudioBuffer& estimate);

/// Short-time objective intelligibility in [0, 1]. Both signals are
/// resampled to 10 kHz, silent frames (40 dB below the loudest reference
/// frame) are dropped, and the mean correlation of normalized and clipped
/// one-third-octave envelopes over 384 ms segments is returned.
double stoi(const AudioBuffer& reference, const AudioBuffer& estimate);

/// Windowed-sinc resampler: 64 taps, Blackman window, cutoff at the lower
/// Nyquist frequency. Output length is ceil(n * to / from).
std::vector<double> resample(const std::vector<double>& x, int from_rate, int to_rate);

struct EvalResult {
  std::string file;
  double snr_db = 0.0;
  std::string noise;
  double sdr_db = 0.0;
  double stoi = 0.0;
  std::optional<double> pesq;  // merged from an external report
};

}  // namespace afpc
