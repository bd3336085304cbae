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

#ifndef MVMF_ANALYSIS_HPP_
#define MVMF_ANALYSIS_HPP_

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mvmf/dataset.hpp"
#include "mvmf/factor_model.hpp"

namespace mvmf {

/// Principal projections of one view: coordinates [U | W] and loadings
/// [V* | V], with axes named shared-1..d, specific-1..r.
struct ViewProjection {
  std::string view;
  std::vector<std::string> subjects;
  std::optional<std::vector<int>> labels;
  std::vector<std::string> axes;
  Matrix coordinates;  // n x (d + r)
  Matrix loadings;     // p x (d + r)
  /// ||scaled_view - coordinates * loadings^T||_F and ||scaled_view||_F.
  double residual_norm = 0.0;
  double data_norm = 0.0;

  /// The r specific coordinate columns.
  Matrix specific() const;
};

struct ProjectionSet {
  Eigen::Index d = 0;
  Eigen::Index r = 0;
  std::vector<ViewProjection> views;
};

ProjectionSet project(const Factorization& f, const MultiViewDataset& ds);

/// Two-class LDA with equal priors. Side 1 is where normal . x + offset > 0,
/// which is the class-1 prediction.
struct LdaSummary {
  Eigen::Vector2d normal = Eigen::Vector2d::Zero();
  double offset = 0.0;
  double accuracy = 0.0;
  double majority_prior = 0.0;
  /// accuracy strictly above the majority-class proportion
  bool drawn = false;
  /// percent[c][s]: share of class c (in %) on side s.
  std::array<std::array<double, 2>, 2> percent{};
};

/// normal = pooled_cov^{-1} (mu_1 - mu_0), boundary through the midpoint of
/// the class means. Pooled covariance uses divisor n - 2.
/// Throws kDegenerateClass (a class with < 2 members, or labels not 0/1),
/// kSingularCovariance, kDimensionMismatch.
LdaSummary lda_boundary(const Matrix& coords, std::span<const int> labels);

struct PcaBaseline {
  Matrix coordinates;     // n x k, top-k left singular vectors
  Vector variance_ratio;  // sigma_i^2 / total variance, non-increasing
};

/// Independent PCA of one scaled view. Throws kViewIndexOutOfRange,
/// kInvalidArgument (k outside [1, min(n, p)]).
PcaBaseline pca_baseline(const MultiViewDataset& ds, std::size_t m, Eigen::Index k);

}  // namespace mvmf

#endif  // MVMF_ANALYSIS_HPP_
