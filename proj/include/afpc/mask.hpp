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

#include "afpc/audio.hpp"
#include "afpc/matrix.hpp"
#include "afpc/stft.hpp"

namespace afpc {

/// frames x bins ratio mask with values in [0, 1].
using IrmSpectrogram = Matrix<double>;

/// sqrt(|S|^2 / (|S|^2 + |N|^2)) per cell; cells with no energy in either are 0.5.
IrmSpectrogram compute_irm(const ComplexSpectrogram& clean, const ComplexSpectrogram& noise);

/// S_hat = mask * |Y| * exp(j angle(Y)).
ComplexSpectrogram apply_mask(const IrmSpectrogram& mask, const ComplexSpectrogram& noisy);

AudioBuffer apply_mask_and_reconstruct(const IrmSpectrogram& mask, const ComplexSpectrogram& noisy,
                                       std::optional<std::size_t> length = std::nullopt);

}  // namespace afpc
