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
#include <filesystem>
#include <string>

#include "json.hpp"

#include "afpc/features.hpp"
#include "afpc/nn/gan.hpp"
#include "afpc/stft.hpp"

namespace afpc {

struct RunPaths {
  std::filesystem::path manifest;
  std::filesystem::path cache_dir;
  std::filesystem::path checkpoint;
  std::filesystem::path out_dir;
  bool operator==(const RunPaths&) const = default;
};

/// Everything a command needs. Defaults reproduce the reference setup.
struct RunConfig {
  StftConfig stft;
  FeatureConfig features;
  nn::TrainConfig train;
  nn::GanArchitecture arch;
  RunPaths paths;
  std::uint64_t seed = 0;

  void validate() const;
  bool operator==(const RunConfig&) const = default;
};

/// Reads `key = value` lines grouped in [stft], [features], [train],
/// [network], [paths] and [run] sections on top of the defaults. Unknown
/// keys are rejected. Relative paths are resolved against the file's directory.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(const std::string& text, const std::filesystem::path& base_dir = {});
/// Inverse of parse_run_config.
std::string format_run_config(const RunConfig& cfg);

void to_json(nlohmann::json& j, const StftConfig& c);
void from_json(const nlohmann::json& j, StftConfig& c);
void to_json(nlohmann::json& j, const FeatureConfig& c);
void from_json(const nlohmann::json& j, FeatureConfig& c);
void to_json(nlohmann::json& j, const RunConfig& c);

namespace nn {
void to_json(nlohmann::json& j, const TrainConfig& c);
void from_json(const nlohmann::json& j, TrainConfig& c);
void to_json(nlohmann::json& j, const GanArchitecture& c);
void from_json(const nlohmann::json& j, GanArchitecture& c);
void to_json(nlohmann::json& j, const NormStats& s);
void from_json(const nlohmann::json& j, NormStats& s);
void to_json(nlohmann::json& j, const EpochRecord& r);
void from_json(const nlohmann::json& j, EpochRecord& r);
}  // namespace nn

}  // namespace afpc
