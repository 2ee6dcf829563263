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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "afpc/audio.hpp"

namespace afpc {

enum class NoiseKind { White, PinkLike, BabbleLike, File };

std::string_view to_string(NoiseKind kind);
std::optional<NoiseKind> parse_noise_kind(std::string_view name);

struct MixSpec {
  double snr_db = 0.0;
  std::uint64_t noise_seed = 0;
  NoiseKind noise_kind = NoiseKind::White;
};

/// Harmonic "speech-like" utterance: voiced segments of 3-5 harmonics over a
/// drifting f0 in [100, 300] Hz, amplitude-modulated at 2-8 Hz, separated by
/// silences. Deterministic given the seed.
AudioBuffer synth_speech_like(std::uint64_t seed, double duration_s, int sample_rate = 16000);

/// Synthetic noise of exactly `length` samples. Throws for NoiseKind::File.
AudioBuffer synth_noise(NoiseKind kind, std::uint64_t seed, std::size_t length, int sample_rate = 16000);

}  // namespace afpc
