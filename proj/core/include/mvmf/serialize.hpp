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

#ifndef MVMF_SERIALIZE_HPP_
#define MVMF_SERIALIZE_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>

#include "mvmf/factor_model.hpp"

namespace mvmf {

// Text layout:
//
//   mvmf-factorization 1
//   d <d>
//   r <r>
//   views <M>
//   matrix V_star <rows> <cols>
//   <rows lines of space-separated values>
//   matrix U[0] <rows> <cols>
//   ...
//
// Values are printed with 17 significant digits, so a write/read cycle is
// exact. Blocks follow the order V_star, then U[m], W[m], V[m] per view.

/// "%.17g" formatting used for every numeric artifact.
std::string format_double(double value);

void write_factorization(std::ostream& out, const Factorization& f);
void write_factorization(const std::filesystem::path& path,
                         const Factorization& f);

/// Throws kFormatError on malformed input and kDimensionMismatch when the
/// blocks are inconsistent.
Factorization read_factorization(std::istream& in);
Factorization read_factorization(const std::filesystem::path& path);

}  // namespace mvmf

#endif  // MVMF_SERIALIZE_HPP_
