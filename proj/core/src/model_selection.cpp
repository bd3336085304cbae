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

#include "mvmf/model_selection.hpp"

#include <exception>
#include <string>

#include "mvmf/errors.hpp"
#include "mvmf/parallel.hpp"

namespace mvmf {

ExplainedFraction variance_explained(const Factorization& f,
                                     const MultiViewDataset& ds, std::size_t m) {
  if (m >= ds.num_views()) {
    throw Error(Errc::kViewIndexOutOfRange,
                "view index " + std::to_string(m) + " out of range");
  }
  const VarianceReport report = compute_variance(f, ds);
  return {report.views[m].shared_fraction, report.views[m].specific_fraction};
}

namespace {

RankCandidate evaluate_candidate(const MultiViewDataset& ds, Eigen::Index d,
                                 Eigen::Index r, double threshold,
                                 const FitConfig& base) {
  FitConfig cfg = base;
  cfg.d = d;
  cfg.r = r;
  cfg.penalty = Penalty::none();
  const FitResult fitted = fit(ds, cfg);
  const VarianceReport report = compute_variance(fitted.model, ds);
  RankCandidate c;
  c.d = d;
  for (const ViewVariance& vv : report.views) {
    ExplainedFraction frac{vv.shared_fraction, vv.specific_fraction};
    if (frac.total() >= threshold) c.qualifies = true;
    c.per_view.push_back(frac);
  }
  return c;
}

}  // namespace

RankScan scan_ranks(const MultiViewDataset& ds, Eigen::Index r, double threshold,
                    const FitConfig& base, unsigned threads) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw Error(Errc::kInvalidArgument, "threshold must lie in (0, 1]");
  }
  if (r < 0) throw Error(Errc::kInvalidArgument, "r must be >= 0");
  const Eigen::Index d_max = ds.max_total_rank() - r;

  RankScan scan;
  const unsigned batch = resolve_threads(threads);
  for (Eigen::Index first = 1; first <= d_max && !scan.selected; first += batch) {
    const Eigen::Index last = std::min<Eigen::Index>(d_max, first + batch - 1);
    const auto size = static_cast<std::size_t>(last - first + 1);
    std::vector<RankCandidate> results(size);
    // a failure past the selected d must not surface, so errors are held per
    // slot and replayed in order
    std::vector<std::exception_ptr> failures(size);
    parallel_for(size, batch, [&](std::size_t i) {
      try {
        results[i] = evaluate_candidate(
            ds, first + static_cast<Eigen::Index>(i), r, threshold, base);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    });
    for (std::size_t i = 0; i < size; ++i) {
      if (failures[i]) std::rethrow_exception(failures[i]);
      scan.candidates.push_back(std::move(results[i]));
      if (scan.candidates.back().qualifies) {
        scan.selected = scan.candidates.back().d;
        break;
      }
    }
  }
  return scan;
}

Eigen::Index select_d(const MultiViewDataset& ds, Eigen::Index r, double threshold,
                      const FitConfig& base, unsigned threads) {
  const RankScan scan = scan_ranks(ds, r, threshold, base, threads);
  if (!scan.selected) {
    throw Error(Errc::kNotReached,
                "no d in [1, " + std::to_string(ds.max_total_rank() - r) +
                    "] explains " + std::to_string(threshold) +
                    " of the variance in any view");
  }
  return *scan.selected;
}

}  // namespace mvmf
