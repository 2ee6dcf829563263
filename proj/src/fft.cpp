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

#include "afpc/fft.hpp"

#include <cmath>
#include <numbers>

#include "afpc/error.hpp"

namespace afpc {

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

Fft::Fft(std::size_t n) : n_(n), bitrev_(n), twiddle_(n / 2), scratch_(n) {
  require(is_power_of_two(n) && n >= 2, ErrorCode::InvalidArgument, "FFT size must be a power of two >= 2");
  std::size_t bits = 0;
  while ((std::size_t(1) << bits) < n) ++bits;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < bits; ++b)
      if (i & (std::size_t(1) << b)) r |= std::size_t(1) << (bits - 1 - b);
    bitrev_[i] = r;
  }
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    twiddle_[k] = {std::cos(angle), std::sin(angle)};
  }
}

void Fft::transform(std::span<std::complex<double>> data, bool inverse) const {
  require(data.size() == n_, ErrorCode::ShapeMismatch, "FFT buffer has wrong length");
  for (std::size_t i = 0; i < n_; ++i)
    if (i < bitrev_[i]) std::swap(data[i], data[bitrev_[i]]);
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n_ / len;
    for (std::size_t start = 0; start < n_; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        std::complex<double> w = twiddle_[k * stride];
        if (inverse) w = std::conj(w);
        const std::complex<double> odd = w * data[start + k + half];
        data[start + k + half] = data[start + k] - odd;
        data[start + k] += odd;
      }
    }
  }
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n_);
    for (auto& v : data) v *= scale;
  }
}

void Fft::forward(std::span<std::complex<double>> data) const { transform(data, false); }
void Fft::inverse(std::span<std::complex<double>> data) const { transform(data, true); }

void Fft::forward_real(std::span<const double> in, std::span<std::complex<double>> half_spectrum) const {
  require(in.size() == n_ && half_spectrum.size() == n_ / 2 + 1, ErrorCode::ShapeMismatch,
          "real FFT buffers have wrong length");
  for (std::size_t i = 0; i < n_; ++i) scratch_[i] = {in[i], 0.0};
  transform(scratch_, false);
  for (std::size_t f = 0; f <= n_ / 2; ++f) half_spectrum[f] = scratch_[f];
}

void Fft::inverse_real(std::span<const std::complex<double>> half_spectrum, std::span<double> out) const {
  require(out.size() == n_ && half_spectrum.size() == n_ / 2 + 1, ErrorCode::ShapeMismatch,
          "real IFFT buffers have wrong length");
  scratch_[0] = {half_spectrum[0].real(), 0.0};
  scratch_[n_ / 2] = {half_spectrum[n_ / 2].real(), 0.0};
  for (std::size_t f = 1; f < n_ / 2; ++f) {
    scratch_[f] = half_spectrum[f];
    scratch_[n_ - f] = std::conj(half_spectrum[f]);
  }
  transform(scratch_, true);
  for (std::size_t i = 0; i < n_; ++i) out[i] = scratch_[i].real();
}

}  // namespace afpc
