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
#include <span>
#include <vector>

namespace afpc {

/// In-place iterative radix-2 FFT of a fixed power-of-two size.
class Fft {
 public:
  explicit Fft(std::size_t n);

  std::size_t size() const noexcept { return n_; }

  /// X[f] = sum_m x[m] exp(-j 2 pi f m / n)
  void forward(std::span<std::complex<double>> data) const;
  /// x[m] = (1/n) sum_f X[f] exp(+j 2 pi f m / n)
  void inverse(std::span<std::complex<double>> data) const;

  /// Bins 0..n/2 of the transform of a real sequence of length n.
  void forward_real(std::span<const double> in, std::span<std::complex<double>> half_spectrum) const;
  /// Real sequence whose spectrum is the conjugate-symmetric extension of `half_spectrum`.
  void inverse_real(std::span<const std::complex<double>> half_spectrum, std::span<double> out) const;

 private:
  void transform(std::span<std::complex<double>> data, bool inverse) const;

  std::size_t n_;
  std::vector<std::size_t> bitrev_;
  std::vector<std::complex<double>> twiddle_;
  mutable std::vector<std::complex<double>> scratch_;
};

bool is_power_of_two(std::size_t n) noexcept;

}  // namespace afpc
