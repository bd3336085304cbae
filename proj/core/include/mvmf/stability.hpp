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

#ifndef MVMF_STABILITY_HPP_
#define MVMF_STABILITY_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "mvmf/dataset.hpp"
#include "mvmf/solver.hpp"

namespace mvmf {

struct StabilityConfig {
  std::size_t n_subsamples = 10000;
  /// Rows drawn per view: ceil(fraction * n_m).
  double fraction = 0.5;
  bool with_replacement = true;
  /// Fit settings for every subsample; defaults to count mode with k = 2.
  FitConfig fit = default_fit();
  std::uint64_t seed = 0;
  /// A run with more failed subsamples than this share is aborted.
  double max_failure_rate = 0.01;

  static FitConfig default_fit() {
    FitConfig cfg;
    cfg.penalty = Penalty::count(2);
    return cfg;
  }
  /// Throws kInvalidArgument.
  void validate() const;
};

/// How a ranking position was separated from its predecessor.
enum class TieBreak { kNone, kLoading, kIndex };

/// Components are ordered: 0 = shared, then one specific component per view.
struct StabilityReport {
  std::vector<std::string> components;  // "shared", "specific:<view name>"
  std::vector<std::string> regions;
  Matrix probability;        // components x p, SP in [0, 1]
  Matrix mean_abs_loading;   // components x p, over selecting subsamples
  std::size_t successful = 0;
  std::size_t failed = 0;
  /// Per component, 0-based region indices by descending SP.
  std::vector<std::vector<Eigen::Index>> ranking;
  /// Aligned with `ranking`: how each position was ordered against the one
  /// before it (kNone when the SPs differ).
  std::vector<std::vector<TieBreak>> tie_break;

  std::size_t component_index(const std::string& name) const;
};

/// Per view, draws ceil(fraction * n_m) rows (at least 2) uniformly, with or
/// without replacement, then re-centers. Duplicate draws get their subject
/// id suffixed with "#<draw number>" so ids stay unique.
MultiViewDataset draw_subsample(const MultiViewDataset& ds, double fraction,
                                std::uint64_t seed, bool with_replacement = true);

/// Seed of subsample `index` derived from the master seed, so each stream
/// is independent of execution order.
std::uint64_t subsample_seed(std::uint64_t master, std::uint64_t index);

/// Fits every subsample and accumulates selection frequencies. A region is
/// selected for a component when any column of that component's loadings is
/// nonzero in its row. Failed fits leave the denominator; too many abort the
/// run with kStabilityAborted. Bit-identical for any thread count.
StabilityReport run_stability(const MultiViewDataset& ds,
                              const StabilityConfig& cfg, unsigned threads = 1);

/// Stable descending order by SP; ties by mean absolute loading
/// (descending), then region index. Throws kUnknownComponent.
std::vector<Eigen::Index> rank_regions(const StabilityReport& report,
                                       std::size_t component);
std::vector<Eigen::Index> rank_regions(const StabilityReport& report,
                                       const std::string& component);

}  // namespace mvmf

#endif  // MVMF_STABILITY_HPP_
