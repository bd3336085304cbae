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

#ifndef MVMF_FACTOR_MODEL_HPP_
#define MVMF_FACTOR_MODEL_HPP_

#include <cstddef>
#include <vector>

#include "mvmf/dataset.hpp"
#include "mvmf/linalg.hpp"

namespace mvmf {

/// Entry-wise tolerance for U^T U = I, W^T W = I and U^T W = 0.
inline constexpr double kOrthogonalityTol = 1e-8;

/// Per-view factors: shared coordinates U (n x d), specific coordinates
/// W (n x r) and specific loadings V (p x r).
struct ViewFactors {
  Matrix U;
  Matrix W;
  Matrix V;
};

/// X^(m) / sqrt(n_m) ~ U^(m) V*^T + W^(m) V^(m)^T for every view m.
struct Factorization {
  Eigen::Index d = 0;
  Eigen::Index r = 0;
  Matrix V_star;  // p x d, shared across views
  std::vector<ViewFactors> views;

  std::size_t num_views() const { return views.size(); }
  Eigen::Index num_regions() const { return V_star.rows(); }
};

/// Checks every block has the declared shape and d + r <= min(n_m, p).
/// Throws kDimensionMismatch / kRankTooLarge.
void validate_shapes(const Factorization& f);

/// Shape check against a dataset (view count, n_m, p).
void validate_against(const Factorization& f, const MultiViewDataset& ds);

/// Largest entry-wise violation of the three orthogonality constraints over
/// all views.
double max_constraint_violation(const Factorization& f);

/// Zero-loading factorization whose coordinates still satisfy the
/// orthogonality constraints (first d+r coordinate axes).
Factorization zero_factorization(const MultiViewDataset& ds, Eigen::Index d,
                                 Eigen::Index r);

enum class PenaltyMode { kWeights, kCount };

/// L1 weights on the columns of V* (lambda_star, length d) and V^(m)
/// (lambda_view[m], length r), or a per-column nonzero target k.
/// Empty weight vectors mean zero penalty.
struct Penalty {
  PenaltyMode mode = PenaltyMode::kWeights;
  Vector lambda_star;
  std::vector<Vector> lambda_view;
  Eigen::Index k = 0;

  static Penalty none() { return {}; }
  static Penalty uniform(std::size_t views, Eigen::Index d, Eigen::Index r,
                         double shared, double specific);
  static Penalty count(Eigen::Index k);

  /// Throws kInvalidArgument on negative weights, wrong lengths, or k
  /// outside [1, p] in count mode.
  void validate(std::size_t views, Eigen::Index d, Eigen::Index r,
                Eigen::Index p) const;

  double shared_weight(Eigen::Index col) const;
  double view_weight(std::size_t m, Eigen::Index col) const;
};

/// U^(m) V*^T + W^(m) V^(m)^T.
Matrix reconstruct(const Factorization& f, std::size_t m);

/// Sum_m ||scaled_view(m) - reconstruct(f, m)||_F^2.
double reconstruction_error(const Factorization& f, const MultiViewDataset& ds);

/// reconstruction_error + 2 M sum_k lambda*_k ||V*_k||_1
///                      + 2 sum_m sum_j lambda^(m)_j ||V^(m)_j||_1.
/// Count-mode penalties carry no fixed weights and are rejected.
double objective(const Factorization& f, const MultiViewDataset& ds,
                 const Penalty& pen);

struct ViewVariance {
  double total = 0.0;
  double shared = 0.0;
  double specific = 0.0;
  double shared_fraction = 0.0;
  double specific_fraction = 0.0;
  Vector specific_by_region;  // diag(V^(m) V^(m)^T)
  /// Either fraction exceeds 1; reported, never clamped.
  bool over_one = false;
};

struct VarianceReport {
  Vector shared_by_region;  // diag(V* V*^T), identical for every view
  std::vector<ViewVariance> views;
};

/// Trace-based variance accounting. Requires the orthogonality constraints
/// to hold (kConstraintViolated otherwise).
VarianceReport compute_variance(const Factorization& f,
                                const MultiViewDataset& ds);

}  // namespace mvmf

#endif  // MVMF_FACTOR_MODEL_HPP_
