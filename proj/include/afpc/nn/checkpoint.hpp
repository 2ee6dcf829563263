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
#include <vector>

#include "afpc/nn/gan.hpp"

namespace afpc::nn {

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// "GANC" | u32 version | u32 metadata length | JSON metadata | f64 parameters
/// (G then D, each layer weights then bias) | optimizer state | u32 CRC-32.
std::vector<char> serialize_checkpoint(const GanModel& model);
GanModel deserialize_checkpoint(const std::vector<char>& bytes);

void save_checkpoint(const GanModel& model, const std::filesystem::path& path);
GanModel load_checkpoint(const std::filesystem::path& path);

}  // namespace afpc::nn
