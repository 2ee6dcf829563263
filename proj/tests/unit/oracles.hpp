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

// Independent reference implementations used by the tests. They are
// written straight from the formulas, in long double where it is cheap, and
// share no code with the library beyond plain data types.

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "afpc/matrix.hpp"

namespace oracle {

std::vector<double> random_signal(std::uint64_t seed, std::size_t n, double scale = 0.3);
std::vector<std::complex<double>> random_spectrum(std::uint64_t seed, std::size_t bins);

/// Bins 0..n/2 of the direct O(n^2) DFT.
std::vector<std::complex<long double>> dft(const std::vector<double>& x);

/// Triangle weight of band b at bin f for B mel bands over [f_min, f_max].
long double mel_weight(std::size_t b, std::size_t f, std::size_t bands, double f_min, double f_max,
                       std::size_t fft_size, int sample_rate);
/// Lowest and highest bin (inclusive) at which band b's triangle is defined.
std::pair<std::size_t, std::size_t> mel_support(std::size_t b, std::size_t bands, double f_min, double f_max,
                                                std::size_t fft_size, int sample_rate);

struct BankSpec {
  std::size_t bands;
  double f_min, f_max;
  std::size_t fft_size;
  int sample_rate;
};

std::vector<long double> sse(const std::vector<std::complex<double>>& frame, const BankSpec& spec);
std::vector<long double> mfcc(const std::vector<long double>& sse, std::size_t count);
std::vector<long double> ssc(const std::vector<std::complex<double>>& frame, const BankSpec& spec);
std::vector<long double> nssc(const std::vector<long double>& ssc, const BankSpec& spec, std::size_t keep);
/// Regression delta of every column, indices clamped to [0, K-1].
afpc::Matrix<long double> delta(const afpc::Matrix<long double>& x, std::size_t window);

/// max_i |a_i - b_i| / max(|b_i|, floor)
double max_rel_error(const std::vector<double>& a, const std::vector<long double>& b, double floor = 1e-12);

/// Central finite difference of f around x[i].
double central_difference(const std::function<double()>& f, double& x, double h);

}  // namespace oracle
