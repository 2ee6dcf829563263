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

#include "afpc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "afpc/error.hpp"
#include "afpc/fft.hpp"
#include "afpc/matrix.hpp"

namespace afpc {

double sdr(const AudioBuffer& reference, const AudioBuffer& estimate) {
  if (reference.size() != estimate.size())
    fail(ErrorCode::LengthMismatch, "reference has " + std::to_string(reference.size()) + " samples, estimate has " +
                                        std::to_string(estimate.size()));
  require(reference.sample_rate == estimate.sample_rate, ErrorCode::SampleRateMismatch, "SDR inputs differ in rate");
  double signal = 0.0, error = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double s = reference.samples[i];
    const double e = s - estimate.samples[i];
    signal += s * s;
    error += e * e;
  }
  if (signal <= 0.0) fail(ErrorCode::ZeroReference, "reference signal has zero energy");
  if (error < 1e-20 * signal) return kSdrSentinelDb;
  return 10.0 * std::log10(signal / error);
}

std::vector<double> resample(const std::vector<double>& x, int from_rate, int to_rate) {
  require(from_rate > 0 && to_rate > 0, ErrorCode::InvalidArgument, "resample rates must be positive");
  if (from_rate == to_rate) return x;
  const long g = std::gcd(from_rate, to_rate);
  const long up = to_rate / g;
  const long down = from_rate / g;
  constexpr long kHalfTaps = 32;
  const double cutoff = 0.5 * std::min(1.0, static_cast<double>(to_rate) / from_rate);

  const auto n_in = static_cast<long>(x.size());
  const long n_out = (n_in * up + down - 1) / down;
  std::vector<double> y(static_cast<std::size_t>(n_out), 0.0);
  for (long n = 0; n < n_out; ++n) {
    // Output sample n sits at input position t = n * down / up.
    const long base = (n * down) / up;
    const double frac = static_cast<double>((n * down) % up) / static_cast<double>(up);
    double acc = 0.0;
    for (long k = base - kHalfTaps + 1; k <= base + kHalfTaps; ++k) {
      if (k < 0 || k >= n_in) continue;
      const double tau = static_cast<double>(base - k) + frac;
      const double arg = 2.0 * cutoff * tau;
      const double sinc = arg == 0.0 ? 1.0 : std::sin(std::numbers::pi * arg) / (std::numbers::pi * arg);
      const double u = tau / kHalfTaps;
      const double window = 0.42 + 0.5 * std::cos(std::numbers::pi * u) + 0.08 * std::cos(2.0 * std::numbers::pi * u);
      acc += x[static_cast<std::size_t>(k)] * 2.0 * cutoff * sinc * window;
    }
    y[static_cast<std::size_t>(n)] = acc;
  }
  return y;
}

namespace {

constexpr int kStoiRate = 10000;
constexpr std::size_t kStoiFrame = 256;
constexpr std::size_t kStoiFft = 512;
constexpr std::size_t kStoiBands = 15;
constexpr double kStoiMinFreq = 150.0;
constexpr std::size_t kStoiSegment = 30;
constexpr double kStoiBeta = -15.0;
constexpr double kStoiDynRange = 40.0;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Symmetric Hann of length n without its zero end points.
std::vector<double> stoi_window(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i + 1) / static_cast<double>(n + 1));
  return w;
}

std::size_t frame_starts(std::size_t length, std::size_t frame, std::size_t hop) {
  return length > frame ? (length - frame + hop - 1) / hop : 0;
}

void remove_silent_frames(std::vector<double>& x, std::vector<double>& y) {
  const std::size_t hop = kStoiFrame / 2;
  const auto w = stoi_window(kStoiFrame);
  const std::size_t count = frame_starts(x.size(), kStoiFrame, hop);
  std::vector<double> level(count);
  for (std::size_t i = 0; i < count; ++i) {
    double e = 0.0;
    for (std::size_t m = 0; m < kStoiFrame; ++m) {
      const double v = w[m] * x[i * hop + m];
      e += v * v;
    }
    level[i] = 20.0 * std::log10(std::sqrt(e) + kEps);
  }
  const double loudest = count ? *std::max_element(level.begin(), level.end()) : 0.0;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < count; ++i)
    if (loudest - kStoiDynRange - level[i] < 0.0) keep.push_back(i);

  const std::size_t out_len = keep.empty() ? 0 : (keep.size() - 1) * hop + kStoiFrame;
  std::vector<double> xs(out_len, 0.0), ys(out_len, 0.0);
  for (std::size_t j = 0; j < keep.size(); ++j) {
    const std::size_t src = keep[j] * hop;
    for (std::size_t m = 0; m < kStoiFrame; ++m) {
      xs[j * hop + m] += w[m] * x[src + m];
      ys[j * hop + m] += w[m] * y[src + m];
    }
  }
  x = std::move(xs);
  y = std::move(ys);
}

// bands x frames one-third-octave envelopes.
Matrix<double> third_octave_envelopes(const std::vector<double>& x, const std::vector<std::pair<std::size_t, std::size_t>>& bands) {
  const std::size_t hop = kStoiFrame / 2;
  const auto w = stoi_window(kStoiFrame);
  const std::size_t count = frame_starts(x.size(), kStoiFrame, hop);
  const Fft fft(kStoiFft);
  std::vector<double> frame(kStoiFft, 0.0);
  std::vector<std::complex<double>> spec(kStoiFft / 2 + 1);
  Matrix<double> env(bands.size(), count);
  for (std::size_t i = 0; i < count; ++i) {
    std::fill(frame.begin(), frame.end(), 0.0);
    for (std::size_t m = 0; m < kStoiFrame; ++m) frame[m] = w[m] * x[i * hop + m];
    fft.forward_real(frame, spec);
    for (std::size_t b = 0; b < bands.size(); ++b) {
      double e = 0.0;
      for (std::size_t f = bands[b].first; f < bands[b].second; ++f) e += std::norm(spec[f]);
      env(b, i) = std::sqrt(e);
    }
  }
  return env;
}

std::vector<std::pair<std::size_t, std::size_t>> third_octave_bins() {
  const std::size_t nbins = kStoiFft / 2 + 1;
  auto nearest = [&](double hz) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < nbins; ++f) {
      const double d = std::abs(static_cast<double>(f) * kStoiRate / static_cast<double>(kStoiFft) - hz);
      if (d < best_d) {
        best_d = d;
        best = f;
      }
    }
    return best;
  };
  std::vector<std::pair<std::size_t, std::size_t>> bands;
  for (std::size_t k = 0; k < kStoiBands; ++k) {
    const double kk = static_cast<double>(k);
    bands.emplace_back(nearest(kStoiMinFreq * std::pow(2.0, (2.0 * kk - 1.0) / 6.0)),
                       nearest(kStoiMinFreq * std::pow(2.0, (2.0 * kk + 1.0) / 6.0)));
  }
  return bands;
}

}  // namespace

double stoi(const AudioBuffer& reference, const AudioBuffer& estimate) {
  if (reference.size() != estimate.size())
    fail(ErrorCode::LengthMismatch, "reference has " + std::to_string(reference.size()) + " samples, estimate has " +
                                        std::to_string(estimate.size()));
  require(reference.sample_rate == estimate.sample_rate, ErrorCode::SampleRateMismatch, "STOI inputs differ in rate");
  std::vector<double> x = resample(reference.samples, reference.sample_rate, kStoiRate);
  std::vector<double> y = resample(estimate.samples, estimate.sample_rate, kStoiRate);
  remove_silent_frames(x, y);

  const auto bands = third_octave_bins();
  const Matrix<double> xe = third_octave_envelopes(x, bands);
  const Matrix<double> ye = third_octave_envelopes(y, bands);
  const std::size_t frames = xe.cols;
  if (frames < kStoiSegment)
    fail(ErrorCode::TooShort, "only " + std::to_string(frames) + " active STOI frames, need " +
                                  std::to_string(kStoiSegment));

  const double clip = std::pow(10.0, -kStoiBeta / 20.0);
  double total = 0.0;
  std::size_t terms = 0;
  std::vector<double> xs(kStoiSegment), ys(kStoiSegment);
  for (std::size_t end = kStoiSegment; end <= frames; ++end) {
    for (std::size_t b = 0; b < bands.size(); ++b) {
      double nx = 0.0, ny = 0.0;
      for (std::size_t i = 0; i < kStoiSegment; ++i) {
        xs[i] = xe(b, end - kStoiSegment + i);
        ys[i] = ye(b, end - kStoiSegment + i);
        nx += xs[i] * xs[i];
        ny += ys[i] * ys[i];
      }
      const double alpha = std::sqrt(nx) / (std::sqrt(ny) + kEps);
      double mx = 0.0, my = 0.0;
      for (std::size_t i = 0; i < kStoiSegment; ++i) {
        ys[i] = std::min(ys[i] * alpha, xs[i] * (1.0 + clip));
        mx += xs[i];
        my += ys[i];
      }
      mx /= kStoiSegment;
      my /= kStoiSegment;
      double sxy = 0.0, sxx = 0.0, syy = 0.0;
      for (std::size_t i = 0; i < kStoiSegment; ++i) {
        const double dx = xs[i] - mx, dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
      }
      total += sxy / ((std::sqrt(sxx) + kEps) * (std::sqrt(syy) + kEps));
      ++terms;
    }
  }
  return std::clamp(total / static_cast<double>(terms), 0.0, 1.0);
}

}  // namespace afpc
