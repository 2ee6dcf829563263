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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "afpc/audio.hpp"
#include "afpc/matrix.hpp"
#include "afpc/stft.hpp"

namespace afpc {

/// Triangular mel filterbank over STFT bins. Band b rises linearly from bin
/// lower[b] (weight 0) to apex[b] (weight 1) and falls back to upper[b]
/// (weight 0). Corner bins are B+2 equally mel-spaced points rounded to the
/// nearest bin.
struct MelFilterbank {
  std::size_t bins = 0;
  double f_min = 0.0;
  double f_max = 0.0;
  std::vector<std::size_t> lower;
  std::vector<std::size_t> apex;
  std::vector<std::size_t> upper;
  /// weights[b][f - lower[b]] for f in [lower[b], upper[b]].
  std::vector<std::vector<double>> weights;

  std::size_t bands() const noexcept { return lower.size(); }
  double weight(std::size_t band, std::size_t bin) const;
};

double hz_to_mel(double hz);
double mel_to_hz(double mel);

MelFilterbank build_mel_filterbank(std::size_t bands, double f_min, double f_max, const StftConfig& cfg);

enum class FeatureSet : std::uint8_t { Stft = 0, Mfcc = 1, Nssc = 2, StftMfcc = 3, StftNssc = 4, MfccNssc = 5 };

std::string_view to_string(FeatureSet set);
std::optional<FeatureSet> parse_feature_set(std::string_view name);
bool uses_stft(FeatureSet set);
bool uses_mfcc(FeatureSet set);
bool uses_nssc(FeatureSet set);

struct FeatureConfig {
  std::size_t bands = 64;
  std::size_t mfcc_count = 22;
  std::size_t nssc_keep = 22;
  double alpha = 0.97;
  std::size_t delta_window = 2;
  FeatureSet feature_set = FeatureSet::MfccNssc;
  std::size_t context = 1;
  double f_min = 0.0;
  double f_max = 8000.0;

  void validate() const;
  bool operator==(const FeatureConfig&) const = default;
};

/// Per-frame dimension of the current-frame feature vector.
std::size_t feature_dimension(const FeatureConfig& cfg, const StftConfig& stft_cfg);
/// (2j+1) * feature_dimension.
std::size_t context_dimension(const FeatureConfig& cfg, const StftConfig& stft_cfg);

constexpr double kSseFloor = 1e-10;

/// sum_f w_b(f) |Y'(f)|^2, floored at kSseFloor.
std::vector<double> compute_sse(std::span<const std::complex<double>> frame, const MelFilterbank& fb);

/// sqrt(2/B) sum_b log10(SSE(b)) cos(p pi / B (b - 0.5)), p = 0..P-1.
std::vector<double> compute_mfcc(std::span<const double> sse, std::size_t count);

/// Energy-weighted mean bin per band; bands without energy report their midpoint.
std::vector<double> compute_ssc(std::span<const std::complex<double>> frame, const MelFilterbank& fb);

/// (SSC(b) - (h_b - l_b)) / (h_b - l_b) for the `keep` lowest bands.
std::vector<double> compute_nssc(std::span<const double> ssc, const MelFilterbank& fb, std::size_t keep);

struct Deltas {
  Matrix<double> delta;
  Matrix<double> double_delta;
};

/// Regression deltas over rows (frames) with edge frames replicated.
Deltas compute_deltas(const Matrix<double>& trajectory, std::size_t window);

struct FeatureFrame {
  std::vector<double> sse;
  std::vector<double> mfcc;
  std::vector<double> ssc;
  std::vector<double> nssc;
  std::vector<double> stft_mag;
};

struct Segment {
  std::string name;
  std::size_t offset = 0;
  std::size_t length = 0;
  bool operator==(const Segment&) const = default;
};

/// frames x D feature values plus the named segment layout of each row.
struct FeatureSequence {
  Matrix<double> values;
  std::vector<Segment> layout;

  std::size_t frames() const noexcept { return values.rows; }
  std::size_t dimension() const noexcept { return values.cols; }
};

/// Layout for a feature set: [STFT] [MFCC dMFCC ddMFCC] [NSSC dNSSC ddNSSC].
std::vector<Segment> feature_layout(const FeatureConfig& cfg, const StftConfig& stft_cfg);

FeatureSequence assemble_feature_vectors(const std::vector<FeatureFrame>& frames, const FeatureConfig& cfg,
                                         const StftConfig& stft_cfg);

/// Row k becomes rows k-j..k+j concatenated (edges replicated).
FeatureSequence add_context(const FeatureSequence& vectors, std::size_t context);

/// Per-frame SSE/MFCC/SSC/NSSC from the pre-emphasized STFT and |Y| from the
/// unemphasized STFT.
std::vector<FeatureFrame> compute_feature_frames(const ComplexSpectrogram& emphasized,
                                                 const ComplexSpectrogram& plain, const MelFilterbank& fb,
                                                 const FeatureConfig& cfg);

struct ExtractedFeatures {
  FeatureSequence context;
  FeatureSequence current;
  ComplexSpectrogram spectrogram;
};

ExtractedFeatures extract_features(const AudioBuffer& x, const FeatureConfig& cfg, const StftConfig& stft_cfg);

}  // namespace afpc
