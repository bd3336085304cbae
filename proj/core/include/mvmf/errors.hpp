// Copyright 2026 The MVMF Authors. All Rights Reserved.
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

#ifndef MVMF_ERRORS_HPP_
#define MVMF_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace mvmf {

enum class Errc {
  // dataset
  kIoError,
  kMismatchedRegions,
  kNonNumericCell,
  kDuplicateSubjectInView,
  kEmptyView,
  kInvalidValue,
  kAlreadyCentered,
  kNotCentered,
  kViewIndexOutOfRange,
  // factor_model
  kDimensionMismatch,
  kConstraintViolated,
  kInvalidArgument,
  kFormatError,
  // solver
  kRankTooLarge,
  kDegenerateData,
  // model_selection
  kNotReached,
  // stability
  kUnknownComponent,
  kStabilityAborted,
  // analysis
  kSingularCovariance,
  kDegenerateClass,
  // synthetic
  kRankDeficient,
  // cli
  kConfigParseError,
};

/// Module that owns an error code, e.g. "dataset" for kNonNumericCell.
std::string_view error_module(Errc code) noexcept;

/// Bare error name, e.g. "NonNumericCell".
std::string_view error_name(Errc code) noexcept;

/// The single exception type thrown by the library. `qualified_code()`
/// yields the module-qualified identifier used in machine-readable records.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }
  std::string qualified_code() const;

 private:
  Errc code_;
};

}  // namespace mvmf

#endif  // MVMF_ERRORS_HPP_
