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

#include "mvmf/stability.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <optional>
#include <random>

#include "mvmf/errors.hpp"
#include "mvmf/parallel.hpp"

namespace mvmf {

namespace {

constexpr std::size_t kMergeBlock = 256;

struct SubsampleOutcome {
  bool ok = false;
  // components x p: row L1 norm of the component's loadings, 0 = unselected
  Matrix row_weight;
};

SubsampleOutcome fit_subsample(const MultiViewDataset& ds,
                               const StabilityConfig& cfg, std::size_t index) {
  SubsampleOutcome out;
  try {
    const MultiViewDataset sub = draw_subsample(
        ds, cfg.fraction, subsample_seed(cfg.seed, index), cfg.with_replacement);
    const FitResult fitted = fit(sub, cfg.fit);
    const Factorization& f = fitted.model;
    out.row_weight.resize(static_cast<Eigen::Index>(ds.num_views() + 1),
                          ds.num_regions());
    out.row_weight.row(0) = f.V_star.cwiseAbs().rowwise().sum().transpose();
    for (std::size_t m = 0; m < ds.num_views(); ++m) {
      out.row_weight.row(static_cast<Eigen::Index>(m + 1)) =
          f.views[m].V.cwiseAbs().rowwise().sum().transpose();
    }
    out.ok = true;
  } catch (const Error&) {
    out.ok = false;
  }
  return out;
}

void compute_ranking(StabilityReport& report) {
  const auto components = static_cast<std::size_t>(report.probability.rows());
  report.ranking.assign(components, {});
  report.tie_break.assign(components, {});
  for (std::size_t c = 0; c < components; ++c) {
    std::vector<Eigen::Index>& order = report.ranking[c];
    order = rank_regions(report, c);
    std::vector<TieBreak>& ties = report.tie_break[c];
    ties.assign(order.size(), TieBreak::kNone);
    const auto row = static_cast<Eigen::Index>(c);
    for (std::size_t i = 1; i < order.size(); ++i) {
      const Eigen::Index a = order[i - 1], b = order[i];
      if (report.probability(row, a) != report.probability(row, b)) continue;
      ties[i] = report.mean_abs_loading(row, a) != report.mean_abs_loading(row, b)
                    ? TieBreak::kLoading
                    : TieBreak::kIndex;
    }
  }
}

}  // namespace

void StabilityConfig::validate() const {
  if (n_subsamples < 1) throw Error(Errc::kInvalidArgument, "n_subsamples must be >= 1");
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error(Errc::kInvalidArgument, "subsample fraction must lie in (0, 1]");
  }
  if (!(max_failure_rate >= 0.0)) {
    throw Error(Errc::kInvalidArgument, "max_failure_rate must be >= 0");
  }
  fit.validate();
}

std::size_t StabilityReport::component_index(const std::string& name) const {
  const auto it = std::find(components.begin(), components.end(), name);
  if (it == components.end()) {
    throw Error(Errc::kUnknownComponent, "no component named '" + name + "'");
  }
  return static_cast<std::size_t>(it - components.begin());
}

std::uint64_t subsample_seed(std::uint64_t master, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master),
                    static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

MultiViewDataset draw_subsample(const MultiViewDataset& ds, double fraction,
                                std::uint64_t seed, bool with_replacement) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error(Errc::kInvalidArgument, "subsample fraction must lie in (0, 1]");
  }
  std::mt19937_64 rng(seed);
  std::vector<ViewMatrix> views;
  views.reserve(ds.num_views());
  for (const ViewMatrix& src : ds.views()) {
    const Eigen::Index n = src.rows();
    // the epsilon keeps products like 0.3 * 10 from rounding up to 4
    auto count = static_cast<Eigen::Index>(
        std::ceil(fraction * static_cast<double>(n) - 1e-9));
    count = std::clamp<Eigen::Index>(count, 2, n);

    std::vector<Eigen::Index> rows(static_cast<std::size_t>(count));
    if (with_replacement) {
      std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
      for (Eigen::Index& row : rows) row = pick(rng);
    } else {
      std::vector<Eigen::Index> all(static_cast<std::size_t>(n));
      std::iota(all.begin(), all.end(), Eigen::Index{0});
      std::shuffle(all.begin(), all.end(), rng);
      std::copy_n(all.begin(), count, rows.begin());
    }

    ViewMatrix view;
    view.name = src.name;
    view.values.resize(count, src.values.cols());
    std::vector<int> labels;
    for (Eigen::Index i = 0; i < count; ++i) {
      const auto row = rows[static_cast<std::size_t>(i)];
      view.values.row(i) = src.values.row(row);
      view.subjects.push_back(src.subjects[static_cast<std::size_t>(row)] + "#" +
                              std::to_string(i + 1));
      if (src.labels) labels.push_back((*src.labels)[static_cast<std::size_t>(row)]);
    }
    if (src.labels) view.labels = std::move(labels);
    views.push_back(std::move(view));
  }
  return center_columns(MultiViewDataset(std::move(views), ds.regions(), false));
}

StabilityReport run_stability(const MultiViewDataset& ds,
                              const StabilityConfig& cfg, unsigned threads) {
  cfg.validate();
  if (!ds.centered()) {
    throw Error(Errc::kNotCentered, "stability selection requires a centered dataset");
  }
  const auto components = static_cast<Eigen::Index>(ds.num_views() + 1);
  const Eigen::Index p = ds.num_regions();

  StabilityReport report;
  report.components.push_back("shared");
  for (const ViewMatrix& v : ds.views()) report.components.push_back("specific:" + v.name);
  report.regions = ds.regions();

  Matrix counts = Matrix::Zero(components, p);
  Matrix loading_sum = Matrix::Zero(components, p);
  const auto allowed_failures = static_cast<std::size_t>(
      std::floor(cfg.max_failure_rate * static_cast<double>(cfg.n_subsamples)));

  for (std::size_t start = 0; start < cfg.n_subsamples; start += kMergeBlock) {
    const std::size_t size = std::min(kMergeBlock, cfg.n_subsamples - start);
    std::vector<SubsampleOutcome> block(size);
    parallel_for(size, threads, [&](std::size_t i) {
      block[i] = fit_subsample(ds, cfg, start + i);
    });
    for (const SubsampleOutcome& outcome : block) {
      if (!outcome.ok) {
        ++report.failed;
        continue;
      }
      ++report.successful;
      for (Eigen::Index c = 0; c < components; ++c) {
        for (Eigen::Index j = 0; j < p; ++j) {
          const double w = outcome.row_weight(c, j);
          if (w != 0.0) {
            counts(c, j) += 1.0;
            loading_sum(c, j) += w;
          }
        }
      }
    }
    if (report.failed > allowed_failures) {
      throw Error(Errc::kStabilityAborted,
                  std::to_string(report.failed) + " of " +
                      std::to_string(start + size) +
                      " subsample fits failed; limit is " +
                      std::to_string(allowed_failures));
    }
  }

  if (report.successful == 0) {
    throw Error(Errc::kStabilityAborted, "every subsample fit failed");
  }
  report.probability = counts / static_cast<double>(report.successful);
  report.mean_abs_loading = Matrix::Zero(components, p);
  for (Eigen::Index c = 0; c < components; ++c) {
    for (Eigen::Index j = 0; j < p; ++j) {
      if (counts(c, j) > 0.0) report.mean_abs_loading(c, j) = loading_sum(c, j) / counts(c, j);
    }
  }
  compute_ranking(report);
  return report;
}

std::vector<Eigen::Index> rank_regions(const StabilityReport& report,
                                       std::size_t component) {
  if (component >= static_cast<std::size_t>(report.probability.rows())) {
    throw Error(Errc::kUnknownComponent,
                "component index " + std::to_string(component) + " out of range");
  }
  const auto row = static_cast<Eigen::Index>(component);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(report.probability.cols()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const bool have_loadings = report.mean_abs_loading.size() == report.probability.size();
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double pa = report.probability(row, a), pb = report.probability(row, b);
    if (pa != pb) return pa > pb;
    if (have_loadings) {
      return report.mean_abs_loading(row, a) > report.mean_abs_loading(row, b);
    }
    return false;
  });
  return order;
}

std::vector<Eigen::Index> rank_regions(const StabilityReport& report,
                                       const std::string& component) {
  return rank_regions(report, report.component_index(component));
}

}  // namespace mvmf
