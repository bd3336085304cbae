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

#ifndef MVMF_TOOLS_COMMANDS_HPP_
#define MVMF_TOOLS_COMMANDS_HPP_

#include <cstdint>
#include <ostream>
#include <string>

#include "artifacts.hpp"

namespace mvmf::cli {

struct FitOptions {
  std::string manifest;
  long d = 1;
  long r = 1;
  std::string lambda_mode = "weights";
  long k = 2;
  double lambda_shared = 0.0;
  double lambda_specific = 0.0;
  int max_iters = 500;
  double tol = 1e-8;
  std::uint64_t seed = 0;
};

struct SelectRankOptions {
  std::string manifest;
  long r = 2;
  double threshold = 0.9;
  int max_iters = 500;
  double tol = 1e-8;
};

struct StabilityOptions {
  std::string manifest;
  long d = 1;
  long r = 1;
  long k = 2;
  std::size_t subsamples = 10000;
  double fraction = 0.5;
  bool without_replacement = false;
  double max_failure_rate = 0.01;
  int max_iters = 500;
  double tol = 1e-8;
  std::uint64_t seed = 0;
};

struct ProjectOptions {
  std::string manifest;
  std::string model;
};

struct SynthOptions {
  std::string spec;
};

/// Shared state of one invocation.
struct Context {
  std::string out;
  unsigned threads = 0;  // 0 = all available workers
  std::ostream* stdout_stream = nullptr;
  Provenance provenance;
};

Json describe(const FitOptions& o);
Json describe(const SelectRankOptions& o);
Json describe(const StabilityOptions& o);
Json describe(const ProjectOptions& o);
Json describe(const SynthOptions& o);

void run_fit(const FitOptions& o, Context& ctx);
void run_select_rank(const SelectRankOptions& o, Context& ctx);
void run_stability(const StabilityOptions& o, Context& ctx);
void run_project(const ProjectOptions& o, Context& ctx);
void run_synth(const SynthOptions& o, Context& ctx);

}  // namespace mvmf::cli

#endif  // MVMF_TOOLS_COMMANDS_HPP_
