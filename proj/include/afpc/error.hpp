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

#include <stdexcept>
#include <string>
#include <string_view>

namespace afpc {

enum class ErrorCode {
  InvalidArgument,
  NonFinite,
  IoFailure,
  MalformedHeader,
  UnsupportedFormat,
  SampleRateMismatch,
  ZeroEnergyInput,
  InputTooShort,
  DegenerateBand,
  ConfigMismatch,
  ShapeMismatch,
  BadDimensions,
  DimensionMismatch,
  TapeMismatch,
  EmptyDataset,
  CacheMismatch,
  VersionMismatch,
  ChecksumMismatch,
  LengthMismatch,
  ZeroReference,
  TooShort,
  UnpairedFile,
};

std::string_view to_string(ErrorCode code);

/// Every recoverable failure in the library is reported as an afpc::Error
/// carrying a machine-readable code. Anything else escaping the library is a bug.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace afpc
