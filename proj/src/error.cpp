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

#include "afpc/error.hpp"

namespace afpc {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::SampleRateMismatch: return "SampleRateMismatch";
    case ErrorCode::ZeroEnergyInput: return "ZeroEnergyInput";
    case ErrorCode::InputTooShort: return "InputTooShort";
    case ErrorCode::DegenerateBand: return "DegenerateBand";
    case ErrorCode::ConfigMismatch: return "ConfigMismatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::BadDimensions: return "BadDimensions";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::TapeMismatch: return "TapeMismatch";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::CacheMismatch: return "CacheMismatch";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::ChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ZeroReference: return "ZeroReference";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::UnpairedFile: return "UnpairedFile";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace afpc
