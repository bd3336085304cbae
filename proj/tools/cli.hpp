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

#ifndef MVMF_TOOLS_CLI_HPP_
#define MVMF_TOOLS_CLI_HPP_

#include <ostream>

namespace mvmf::cli {

/// Exit statuses of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;

/// Entry point of the mvmf command line. Artifacts go to the --out
/// directory; `out` receives short summaries (e.g. the selected rank) and
/// `err` the error record of a failed run.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mvmf::cli

#endif  // MVMF_TOOLS_CLI_HPP_
