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

#include "afpc/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "afpc/error.hpp"

namespace afpc {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

double MelFilterbank::weight(std::size_t band, std::size_t bin) const {
  if (bin < lower[band] || bin > upper[band]) return 0.0;
  return weights[band][bin - lower[band]];
}

MelFilterbank build_mel_filterbank(std::size_t bands, double f_min, double f_max, const StftConfig& cfg) {
  cfg.validate();
  require(bands >= 1, ErrorCode::InvalidArgument, "filterbank needs at least one band");
  require(f_min >= 0.0 && f_min < f_max && f_max <= cfg.sample_rate / 2.0, ErrorCode::InvalidArgument,
          "filterbank range must satisfy 0 <= f_min < f_max <= fs/2");

  const double mel_lo = hz_to_mel(f_min);
  const double mel_hi = hz_to_mel(f_max);
  const double bin_per_hz = static_cast<double>(cfg.fft_size()) / cfg.sample_rate;
  std::vector<std::size_t> corner(bands + 2);
  for (std::size_t i = 0; i < bands + 2; ++i) {
    const double mel = mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) / static_cast<double>(bands + 1);
    corner[i] = static_cast<std::size_t>(std::lround(mel_to_hz(mel) * bin_per_hz));
    if (i > 0 && corner[i] <= corner[i - 1])
      fail(ErrorCode::DegenerateBand, "mel points " + std::to_string(i - 1) + " and " + std::to_string(i) +
                                          " both map to bin " + std::to_string(corner[i]));
  }

  MelFilterbank fb;
  fb.bins = cfg.bins();
  fb.f_min = f_min;
  fb.f_max = f_max;
  for (std::size_t b = 0; b < bands; ++b) {
    const std::size_t lo = corner[b], mid = corner[b + 1], hi = corner[b + 2];
    std::vector<double> w(hi - lo + 1);
    for (std::size_t f = lo; f <= hi; ++f) {
      w[f - lo] = f <= mid ? static_cast<double>(f - lo) / static_cast<double>(mid - lo)
                           : static_cast<double>(hi - f) / static_cast<double>(hi - mid);
    }
    fb.lower.push_back(lo);
    fb.apex.push_back(mid);
    fb.upper.push_back(hi);
    fb.weights.push_back(std::move(w));
  }
  return fb;
}

std::string_view to_string(FeatureSet set) {
  switch (set) {
    case FeatureSet::Stft: return "stft";
    case FeatureSet::Mfcc: return "mfcc";
    case FeatureSet::Nssc: return "nssc";
    case FeatureSet::StftMfcc: return "stft+mfcc";
    case FeatureSet::StftNssc: return "stft+nssc";
    case FeatureSet::MfccNssc: return "mfcc+nssc";
  }
  return "?";
}

std::optional<FeatureSet> parse_feature_set(std::string_view name) {
  for (auto s : {FeatureSet::Stft, FeatureSet::Mfcc, FeatureSet::Nssc, FeatureSet::StftMfcc, FeatureSet::StftNssc,
                 FeatureSet::MfccNssc})
    if (to_string(s) == name) return s;
  return std::nullopt;
}

bool uses_stft(FeatureSet s) {
  return s == FeatureSet::Stft || s == FeatureSet::StftMfcc || s == FeatureSet::StftNssc;
}
bool uses_mfcc(FeatureSet s) {
  return s == FeatureSet::Mfcc || s == FeatureSet::StftMfcc || s == FeatureSet::MfccNssc;
}
bool uses_nssc(FeatureSet s) {
  return s == FeatureSet::Nssc || s == FeatureSet::StftNssc || s == FeatureSet::MfccNssc;
}

void FeatureConfig::validate() const {
  require(bands >= 1, ErrorCode::InvalidArgument, "B must be >= 1");
  require(mfcc_count >= 1 && mfcc_count <= bands, ErrorCode::InvalidArgument, "need 1 <= P <= B");
  require(nssc_keep >= 1 && nssc_keep <= bands, ErrorCode::InvalidArgument, "need 1 <= nssc_keep <= B");
  require(delta_window >= 1, ErrorCode::InvalidArgument, "delta window must be >= 1");
  require(alpha >= 0.0 && alpha <= 1.0, ErrorCode::InvalidArgument, "alpha must lie in [0, 1]");
}

std::vector<Segment> feature_layout(const FeatureConfig& cfg, const StftConfig& stft_cfg) {
  std::vector<Segment> layout;
  std::size_t offset = 0;
  auto push = [&](std::string name, std::size_t len) {
    layout.push_back({std::move(name), offset, len});
    offset += len;
  };
  if (uses_stft(cfg.feature_set)) push("STFT", stft_cfg.bins());
  if (uses_mfcc(cfg.feature_set)) {
    push("MFCC", cfg.mfcc_count);
    push("dMFCC", cfg.mfcc_count);
    push("ddMFCC", cfg.mfcc_count);
  }
  if (uses_nssc(cfg.feature_set)) {
    push("NSSC", cfg.nssc_keep);
    push("dNSSC", cfg.nssc_keep);
    push("ddNSSC", cfg.nssc_keep);
  }
  return layout;
}

std::size_t feature_dimension(const FeatureConfig& cfg, const StftConfig& stft_cfg) {
  std::size_t d = 0;
  for (const auto& s : feature_layout(cfg, stft_cfg)) d += s.length;
  return d;
}

std::size_t context_dimension(const FeatureConfig& cfg, const StftConfig& stft_cfg) {
  return (2 * cfg.context + 1) * feature_dimension(cfg, stft_cfg);
}

std::vector<double> compute_sse(std::span<const std::complex<double>> frame, const MelFilterbank& fb) {
  require(frame.size() == fb.bins, ErrorCode::ShapeMismatch, "frame length does not match filterbank");
  std::vector<double> sse(fb.bands());
  for (std::size_t b = 0; b < fb.bands(); ++b) {
    double acc = 0.0;
    for (std::size_t f = fb.lower[b]; f <= fb.upper[b]; ++f) acc += fb.weights[b][f - fb.lower[b]] * std::norm(frame[f]);
    sse[b] = std::max(acc, kSseFloor);
  }
  return sse;
}

std::vector<double> compute_mfcc(std::span<const double> sse, std::size_t count) {
  const std::size_t bands = sse.size();
  require(count >= 1 && count <= bands, ErrorCode::InvalidArgument, "MFCC count must lie in [1, B]");
  std::vector<double> log_sse(bands);
  for (std::size_t b = 0; b < bands; ++b) log_sse[b] = std::log10(std::max(sse[b], kSseFloor));
  const double scale = std::sqrt(2.0 / static_cast<double>(bands));
  std::vector<double> mfcc(count);
  for (std::size_t p = 0; p < count; ++p) {
    double acc = 0.0;
    for (std::size_t b = 0; b < bands; ++b)
      acc += log_sse[b] * std::cos(static_cast<double>(p) * std::numbers::pi / static_cast<double>(bands) *
                                   (static_cast<double>(b) - 0.5));
    mfcc[p] = scale * acc;
  }
  return mfcc;
}

std::vector<double> compute_ssc(std::span<const std::complex<double>> frame, const MelFilterbank& fb) {
  require(frame.size() == fb.bins, ErrorCode::ShapeMismatch, "frame length does not match filterbank");
  std::vector<double> ssc(fb.bands());
  for (std::size_t b = 0; b < fb.bands(); ++b) {
    double num = 0.0, den = 0.0;
    for (std::size_t f = fb.lower[b]; f <= fb.upper[b]; ++f) {
      const double e = fb.weights[b][f - fb.lower[b]] * std::norm(frame[f]);
      num += static_cast<double>(f) * e;
      den += e;
    }
    ssc[b] = den < 1e-20 ? 0.5 * static_cast<double>(fb.lower[b] + fb.upper[b]) : num / den;
  }
  return ssc;
}

std::vector<double> compute_nssc(std::span<const double> ssc, const MelFilterbank& fb, std::size_t keep) {
  require(ssc.size() == fb.bands(), ErrorCode::ShapeMismatch, "SSC length does not match filterbank");
  require(keep >= 1 && keep <= fb.bands(), ErrorCode::InvalidArgument, "NSSC keep count must lie in [1, B]");
  std::vector<double> nssc(keep);
  for (std::size_t b = 0; b < keep; ++b) {
    const double width = static_cast<double>(fb.upper[b] - fb.lower[b]);
    nssc[b] = (ssc[b] - width) / width;
  }
  return nssc;
}

namespace {

Matrix<double> regression_delta(const Matrix<double>& x, std::size_t window) {
  Matrix<double> d(x.rows, x.cols);
  if (x.rows == 0) return d;
  double denom = 0.0;
  for (std::size_t n = 1; n <= window; ++n) denom += static_cast<double>(n * n);
  denom *= 2.0;
  const auto last = static_cast<std::ptrdiff_t>(x.rows) - 1;
  auto clamp_row = [last](std::ptrdiff_t t) { return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(t, 0, last)); };
  for (std::size_t t = 0; t < x.rows; ++t) {
    for (std::size_t n = 1; n <= window; ++n) {
      const auto ahead = x.row(clamp_row(static_cast<std::ptrdiff_t>(t + n)));
      const auto behind = x.row(clamp_row(static_cast<std::ptrdiff_t>(t) - static_cast<std::ptrdiff_t>(n)));
      for (std::size_t c = 0; c < x.cols; ++c) d(t, c) += static_cast<double>(n) * (ahead[c] - behind[c]);
    }
    for (std::size_t c = 0; c < x.cols; ++c) d(t, c) /= denom;
  }
  return d;
}

}  // namespace

Deltas compute_deltas(const Matrix<double>& trajectory, std::size_t window) {
  require(trajectory.rows >= 1, ErrorCode::InvalidArgument, "delta trajectory needs at least one frame");
  require(window >= 1, ErrorCode::InvalidArgument, "delta window must be >= 1");
  Deltas out;
  out.delta = regression_delta(trajectory, window);
  out.double_delta = regression_delta(out.delta, window);
  return out;
}

FeatureSequence assemble_feature_vectors(const std::vector<FeatureFrame>& frames, const FeatureConfig& cfg,
                                         const StftConfig& stft_cfg) {
  cfg.validate();
  FeatureSequence seq;
  seq.layout = feature_layout(cfg, stft_cfg);
  const std::size_t dim = feature_dimension(cfg, stft_cfg);
  const std::size_t k = frames.size();
  seq.values = Matrix<double>(k, dim);
  if (k == 0) return seq;

  auto gather = [&](auto member, std::size_t width, const char* what) {
    Matrix<double> m(k, width);
    for (std::size_t t = 0; t < k; ++t) {
      const std::vector<double>& v = frames[t].*member;
      if (v.size() != width)
        fail(ErrorCode::ConfigMismatch, std::string(what) + " of frame " + std::to_string(t) + " has " +
                                            std::to_string(v.size()) + " values, expected " + std::to_string(width));
      std::copy(v.begin(), v.end(), m.row(t).begin());
    }
    return m;
  };
  auto place = [&](const Matrix<double>& m, std::size_t offset) {
    for (std::size_t t = 0; t < k; ++t) std::copy(m.row(t).begin(), m.row(t).end(), seq.values.row(t).begin() + offset);
  };
  auto place_with_deltas = [&](const Matrix<double>& base, std::size_t offset) {
    const Deltas d = compute_deltas(base, cfg.delta_window);
    place(base, offset);
    place(d.delta, offset + base.cols);
    place(d.double_delta, offset + 2 * base.cols);
  };

  std::size_t offset = 0;
  if (uses_stft(cfg.feature_set)) {
    place(gather(&FeatureFrame::stft_mag, stft_cfg.bins(), "STFT magnitude"), offset);
    offset += stft_cfg.bins();
  }
  if (uses_mfcc(cfg.feature_set)) {
    place_with_deltas(gather(&FeatureFrame::mfcc, cfg.mfcc_count, "MFCC"), offset);
    offset += 3 * cfg.mfcc_count;
  }
  if (uses_nssc(cfg.feature_set)) {
    place_with_deltas(gather(&FeatureFrame::nssc, cfg.nssc_keep, "NSSC"), offset);
    offset += 3 * cfg.nssc_keep;
  }
  return seq;
}

FeatureSequence add_context(const FeatureSequence& vectors, std::size_t context) {
  const std::size_t k = vectors.frames();
  const std::size_t d = vectors.dimension();
  const std::size_t span = 2 * context + 1;
  FeatureSequence out;
  out.values = Matrix<double>(k, span * d);
  for (std::size_t c = 0; c < span; ++c) {
    for (const auto& seg : vectors.layout) {
      const std::ptrdiff_t rel = static_cast<std::ptrdiff_t>(c) - static_cast<std::ptrdiff_t>(context);
      std::string name = seg.name + (rel == 0 ? "[t]" : "[t" + std::string(rel > 0 ? "+" : "") + std::to_string(rel) + "]");
      out.layout.push_back({std::move(name), c * d + seg.offset, seg.length});
    }
  }
  if (k == 0) return out;
  const auto last = static_cast<std::ptrdiff_t>(k) - 1;
  for (std::size_t t = 0; t < k; ++t) {
    auto dst = out.values.row(t);
    for (std::size_t c = 0; c < span; ++c) {
      const std::ptrdiff_t src_t = std::clamp<std::ptrdiff_t>(
          static_cast<std::ptrdiff_t>(t) + static_cast<std::ptrdiff_t>(c) - static_cast<std::ptrdiff_t>(context), 0, last);
      const auto src = vectors.values.row(static_cast<std::size_t>(src_t));
      std::copy(src.begin(), src.end(), dst.begin() + c * d);
    }
  }
  return out;
}

std::vector<FeatureFrame> compute_feature_frames(const ComplexSpectrogram& emphasized, const ComplexSpectrogram& plain,
                                                 const MelFilterbank& fb, const FeatureConfig& cfg) {
  require(emphasized.frames == plain.frames && emphasized.config == plain.config, ErrorCode::ShapeMismatch,
          "emphasized and plain spectrograms disagree");
  std::vector<FeatureFrame> frames(plain.frames);
  for (std::size_t k = 0; k < plain.frames; ++k) {
    FeatureFrame& fr = frames[k];
    const auto ey = emphasized.frame(k);
    if (uses_mfcc(cfg.feature_set)) {
      fr.sse = compute_sse(ey, fb);
      fr.mfcc = compute_mfcc(fr.sse, cfg.mfcc_count);
    }
    if (uses_nssc(cfg.feature_set)) {
      fr.ssc = compute_ssc(ey, fb);
      fr.nssc = compute_nssc(fr.ssc, fb, cfg.nssc_keep);
    }
    if (uses_stft(cfg.feature_set)) {
      const auto y = plain.frame(k);
      fr.stft_mag.resize(y.size());
      for (std::size_t f = 0; f < y.size(); ++f) fr.stft_mag[f] = std::abs(y[f]);
    }
  }
  return frames;
}

ExtractedFeatures extract_features(const AudioBuffer& x, const FeatureConfig& cfg, const StftConfig& stft_cfg) {
  cfg.validate();
  ExtractedFeatures out;
  out.spectrogram = stft(x, stft_cfg);
  const ComplexSpectrogram emphasized = stft(preemphasis(x, cfg.alpha), stft_cfg);
  const MelFilterbank fb = build_mel_filterbank(cfg.bands, cfg.f_min, cfg.f_max, stft_cfg);
  const auto frames = compute_feature_frames(emphasized, out.spectrogram, fb, cfg);
  out.current = assemble_feature_vectors(frames, cfg, stft_cfg);
  out.context = add_context(out.current, cfg.context);
  return out;
}

}  // namespace afpc
