// Copyright 2026 The groupscope Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GROUPSCOPE_ERROR_H_
#define GROUPSCOPE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace groupscope {

enum class ErrorCode {
  kInvalidArgument,
  kEmptyGroup,
  kMissingFile,
  kDimensionMismatch,
  kUnsupportedFormat,
  kEmptyRegion,
  kParseError,
  kValidationError,
  kIoError,
  kTemplateError,
  kMissingAsset,
  kRemoteUnavailable,
  kBackendError,
  kCoverageMismatch,
  kTooLarge,
  kConfigError,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures surface as this exception; `code()` identifies the
// failure class so callers (notably the CLI) can map it to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace groupscope

#endif  // GROUPSCOPE_ERROR_H_
