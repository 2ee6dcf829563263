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

#include "afpc/mask.hpp"

#include <cmath>

#include "afpc/error.hpp"

namespace afpc {

IrmSpectrogram compute_irm(const ComplexSpectrogram& clean, const ComplexSpectrogram& noise) {
  if (clean.frames != noise.frames || !(clean.config == noise.config))
    fail(ErrorCode::ShapeMismatch, "clean has " + std::to_string(clean.frames) + " frames, noise has " +
                                       std::to_string(noise.frames));
  IrmSpectrogram irm(clean.frames, clean.bins());
  for (std::size_t i = 0; i < clean.data.size(); ++i) {
    const double s2 = std::norm(clean.data[i]);
    const double total = s2 + std::norm(noise.data[i]);
    irm.data[i] = total < 1e-20 ? 0.5 : std::sqrt(s2 / total);
  }
  return irm;
}

ComplexSpectrogram apply_mask(const IrmSpectrogram& mask, const ComplexSpectrogram& noisy) {
  if (mask.rows != noisy.frames || mask.cols != noisy.bins())
    fail(ErrorCode::ShapeMismatch, "mask is " + std::to_string(mask.rows) + "x" + std::to_string(mask.cols) +
                                       ", spectrogram is " + std::to_string(noisy.frames) + "x" +
                                       std::to_string(noisy.bins()));
  ComplexSpectrogram out = noisy;
  // Scaling the complex value by a non-negative real keeps the phase of Y.
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = noisy.data[i] * mask.data[i];
  return out;
}

AudioBuffer apply_mask_and_reconstruct(const IrmSpectrogram& mask, const ComplexSpectrogram& noisy,
                                       std::optional<std::size_t> length) {
  return istft(apply_mask(mask, noisy), length);
}

}  // namespace afpc
