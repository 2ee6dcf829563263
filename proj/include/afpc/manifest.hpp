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
#include <optional>
#include <string>
#include <vector>

#include "afpc/synth.hpp"

namespace afpc {

enum class Split { Train, Test };

/// One line: clean<TAB>noise<TAB>snr_db<TAB>split, optionally followed by
/// noisy<TAB>noise_label once a corpus has been mixed. `noise` is either a
/// WAV path or the name of a synthetic generator (white, pink_like, babble_like).
struct ManifestEntry {
  std::filesystem::path clean;
  std::string noise;
  double snr_db = 0.0;
  Split split = Split::Train;
  std::filesystem::path noisy;
  std::string noise_label;

  /// Set when `noise` names a synthetic generator.
  std::optional<NoiseKind> synthetic_noise() const;

  /// Basename shared by the clean, noise and noisy files of a mixed entry.
  std::string stem() const;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;

  std::vector<ManifestEntry> split(Split which) const;
};

/// Relative paths are resolved against the manifest's directory.
DatasetManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

std::string_view to_string(Split split);

}  // namespace afpc
