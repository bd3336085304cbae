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

#ifndef MVMF_SOLVER_HPP_
#define MVMF_SOLVER_HPP_

#include <cstdint>
#include <vector>

#include "mvmf/dataset.hpp"
#include "mvmf/factor_model.hpp"

namespace mvmf {

struct FitConfig {
  Eigen::Index d = 1;
  Eigen::Index r = 1;
  Penalty penalty;
  int max_iters = 500;
  double rel_tol = 1e-8;
  /// Carried for provenance. Initialisation and rank-deficient completions
  /// are deterministic functions of the data, so the fit does not consume it.
  std::uint64_t seed = 0;

  /// Throws kInvalidArgument.
  void validate() const;
};

struct FitTrace {
  /// objective[0] is the value at initialisation, objective[t] the value after
  /// iteration t. In count mode each entry uses the thresholds implied at that
  /// iteration (zero at initialisation).
  std::vector<double> objective;
  /// Value after the projection half-step of iteration t (index t-1).
  std::vector<double> projection_objective;
  /// Max orthogonality violation, aligned with `objective`.
  std::vector<double> max_violation;
  int iterations = 0;
  bool converged = false;
};

struct FitResult {
  Factorization model;
  FitTrace trace;
  /// Weights used by the last loading update. Equals cfg.penalty in weight
  /// mode; in count mode, the implied per-column thresholds.
  Penalty effective_penalty;
};

/// SVD-based start: V* from the top-d right singular vectors of the stacked
/// scaled views (scaled by singular values / sqrt(M)); per view, V from the
/// top-r right singular vectors of the view's residual after removing the
/// shared directions; [U|W] the polar factor of X[V*|V].
/// Throws kNotCentered, kRankTooLarge, kDegenerateData.
Factorization init(const MultiViewDataset& ds, const FitConfig& cfg);

/// [U^(m)|W^(m)] <- polar factor of scaled_view(m) [V* | V^(m)], the exact
/// minimiser of the reconstruction error over jointly orthonormal
/// coordinates.
Factorization update_projections(const Factorization& f,
                                 const MultiViewDataset& ds);

/// Closed-form loading update for fixed coordinates:
///   V^(m)_j <- soft(X_m^T W^(m)_j, lambda^(m)_j)
///   V*_k    <- soft((1/M) sum_m X_m^T U^(m)_k, lambda*_k)
/// with X_m the scaled views. In count mode each column keeps exactly k
/// entries (see keep_top_k). `implied`, when given, receives the weights that
/// were applied. Throws kConstraintViolated if the coordinates are not
/// orthonormal.
Factorization update_loadings(const Factorization& f,
                              const MultiViewDataset& ds, const Penalty& pen,
                              Penalty* implied = nullptr);

/// Count-mode threshold for one column: keeps the k largest |target| entries
/// (ties toward the lower index) and shrinks them by a threshold placed
/// midway between the k-th largest magnitude and the next strictly smaller
/// one. k >= size keeps everything unshrunk.
Vector keep_top_k(const Vector& target, Eigen::Index k, double* threshold);

/// Alternates update_projections / update_loadings from init until the
/// relative objective change drops below rel_tol or max_iters is hit.
FitResult fit(const MultiViewDataset& ds, const FitConfig& cfg);

}  // namespace mvmf

#endif  // MVMF_SOLVER_HPP_
