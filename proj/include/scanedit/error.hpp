// Copyright 2026 The scanedit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SCANEDIT__ERROR_HPP_
#define SCANEDIT__ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace scanedit
{

enum class ErrorCode
{
  kMalformedScan,
  kLabelLengthMismatch,
  kMalformedBoxLine,
  kMalformedScene,
  kMalformedArchive,
  kMalformedGridDump,
  kOriginPoint,
  kInvalidArgument,
  kEmptyObject,
  kNoDonorSector,
  kInsufficientGroundContext,
  kNoObjectFreeSector,
  kTooFewPoints,
  kEmptyCategory,
  kUnknownObject,
  kNoGroundPoints,
  kObjectOutOfGrid,
  kUnnormalizedInput,
  kEmptySet,
  kEmptyCloud,
  kIo,
  kConfig,
};

std::string_view error_code_name(ErrorCode code);

/// All recoverable failures in the toolkit are reported as this exception.
/// `line()` is nonzero for text-format errors that can be pinned to a line.
class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string & message, std::size_t line = 0)
  : std::runtime_error(message), code_(code), line_(line)
  {
  }

  ErrorCode code() const noexcept { return code_; }
  std::size_t line() const noexcept { return line_; }

private:
  ErrorCode code_;
  std::size_t line_;
};

}  // namespace scanedit

#endif  // SCANEDIT__ERROR_HPP_
