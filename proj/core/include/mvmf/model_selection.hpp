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

#ifndef MVMF_MODEL_SELECTION_HPP_
#define MVMF_MODEL_SELECTION_HPP_

#include <optional>
#include <vector>

#include "mvmf/dataset.hpp"
#include "mvmf/factor_model.hpp"
#include "mvmf/solver.hpp"

namespace mvmf {

struct ExplainedFraction {
  double shared = 0.0;
  double specific = 0.0;
  double total() const { return shared + specific; }
};

/// Tr{V* V*^T} / total(m) and Tr{V^(m) V^(m)^T} / total(m).
ExplainedFraction variance_explained(const Factorization& f,
                                     const MultiViewDataset& ds, std::size_t m);

struct RankCandidate {
  Eigen::Index d = 0;
  std::vector<ExplainedFraction> per_view;
  bool qualifies = false;
};

struct RankScan {
  /// Candidates d = 1, 2, ... up to the first qualifying one (or d_max).
  std::vector<RankCandidate> candidates;
  std::optional<Eigen::Index> selected;
};

/// Linear scan over d = 1..d_max, d_max = min_m min(n_m, p) - r, fitting each
/// candidate from scratch with zero penalty. Candidates are fitted in
/// batches of `threads` and the scan stops after the first qualifying d, so
/// the result does not depend on the thread count.
RankScan scan_ranks(const MultiViewDataset& ds, Eigen::Index r, double threshold,
                    const FitConfig& base, unsigned threads = 1);

/// Smallest d with shared + specific fraction >= threshold in at least one
/// view. Throws kNotReached, kInvalidArgument.
Eigen::Index select_d(const MultiViewDataset& ds, Eigen::Index r, double threshold,
                      const FitConfig& base, unsigned threads = 1);

}  // namespace mvmf

#endif  // MVMF_MODEL_SELECTION_HPP_
