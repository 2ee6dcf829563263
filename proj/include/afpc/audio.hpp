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

#include <filesystem>
#include <span>
#include <vector>

namespace afpc {

/// Mono waveform. Samples are nominally in [-1, 1].
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate = 16000;

  std::size_t size() const noexcept { return samples.size(); }
  double duration_seconds() const { return static_cast<double>(samples.size()) / sample_rate; }
};

/// Throws NonFinite / InvalidArgument when the buffer violates its invariants.
void validate(const AudioBuffer& buf);

double energy(std::span<const double> x);

/// Reads a RIFF/WAVE PCM16 mono file. Samples are scaled by 1/32768.
AudioBuffer read_wav(const std::filesystem::path& path);

/// Writes PCM16 mono. Samples are clamped to [-1, 1 - 1/32768] and rounded.
void write_wav(const AudioBuffer& buf, const std::filesystem::path& path);

std::int16_t quantize_pcm16(double x) noexcept;

struct Mixture {
  AudioBuffer noisy;
  AudioBuffer scaled_noise;
  double gain = 1.0;
};

/// y = s + g*n with g chosen so 10*log10(E_s / E_{g n}) == snr_db, using
/// full-utterance energies. The noise is truncated to the clean length.
Mixture mix_at_snr(const AudioBuffer& clean, const AudioBuffer& noise, double snr_db);

/// 10*log10(E_s / E_n).
double measured_snr_db(std::span<const double> signal, std::span<const double> noise);

}  // namespace afpc
