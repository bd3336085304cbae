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

#include "mvmf/errors.hpp"

namespace mvmf {

std::string_view error_module(Errc code) noexcept {
  switch (code) {
    case Errc::kIoError:
    case Errc::kMismatchedRegions:
    case Errc::kNonNumericCell:
    case Errc::kDuplicateSubjectInView:
    case Errc::kEmptyView:
    case Errc::kInvalidValue:
    case Errc::kAlreadyCentered:
    case Errc::kNotCentered:
    case Errc::kViewIndexOutOfRange:
      return "dataset";
    case Errc::kDimensionMismatch:
    case Errc::kConstraintViolated:
    case Errc::kInvalidArgument:
    case Errc::kFormatError:
      return "factor_model";
    case Errc::kRankTooLarge:
    case Errc::kDegenerateData:
      return "solver";
    case Errc::kNotReached:
      return "model_selection";
    case Errc::kUnknownComponent:
    case Errc::kStabilityAborted:
      return "stability";
    case Errc::kSingularCovariance:
    case Errc::kDegenerateClass:
      return "analysis";
    case Errc::kRankDeficient:
      return "synthetic";
    case Errc::kConfigParseError:
      return "cli";
  }
  return "unknown";
}

std::string_view error_name(Errc code) noexcept {
  switch (code) {
    case Errc::kIoError: return "IoError";
    case Errc::kMismatchedRegions: return "MismatchedRegions";
    case Errc::kNonNumericCell: return "NonNumericCell";
    case Errc::kDuplicateSubjectInView: return "DuplicateSubjectInView";
    case Errc::kEmptyView: return "EmptyView";
    case Errc::kInvalidValue: return "InvalidValue";
    case Errc::kAlreadyCentered: return "AlreadyCentered";
    case Errc::kNotCentered: return "NotCentered";
    case Errc::kViewIndexOutOfRange: return "ViewIndexOutOfRange";
    case Errc::kDimensionMismatch: return "DimensionMismatch";
    case Errc::kConstraintViolated: return "ConstraintViolated";
    case Errc::kInvalidArgument: return "InvalidArgument";
    case Errc::kFormatError: return "FormatError";
    case Errc::kRankTooLarge: return "RankTooLarge";
    case Errc::kDegenerateData: return "DegenerateData";
    case Errc::kNotReached: return "NotReached";
    case Errc::kUnknownComponent: return "UnknownComponent";
    case Errc::kStabilityAborted: return "StabilityAborted";
    case Errc::kSingularCovariance: return "SingularCovariance";
    case Errc::kDegenerateClass: return "DegenerateClass";
    case Errc::kRankDeficient: return "RankDeficient";
    case Errc::kConfigParseError: return "ConfigParseError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

std::string Error::qualified_code() const {
  std::string out(error_module(code_));
  out += '.';
  out += error_name(code_);
  return out;
}

}  // namespace mvmf
