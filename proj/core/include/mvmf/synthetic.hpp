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

#ifndef MVMF_SYNTHETIC_HPP_
#define MVMF_SYNTHETIC_HPP_

#include <cstdint>
#include <vector>

#include "mvmf/dataset.hpp"
#include "mvmf/factor_model.hpp"

namespace mvmf {

/// Column supports: for each loading column, the regions allowed to be
/// nonzero. An empty list means "all regions".
using Supports = std::vector<std::vector<Eigen::Index>>;

/// Planted-factor specification. Loading templates may be given verbatim;
/// otherwise they are drawn from the seed with unit column norm (times the
/// scale) on the declared supports.
struct PlantSpec {
  std::vector<Eigen::Index> n;  // rows per view; size() is M
  Eigen::Index p = 0;
  Eigen::Index d = 0;
  Eigen::Index r = 0;

  Matrix shared_loadings;                 // p x d, or empty
  std::vector<Matrix> specific_loadings;  // M blocks of p x r, or empty
  Supports shared_support;                // d lists, or empty
  std::vector<Supports> specific_support;  // M x r lists, or empty
  double shared_scale = 1.0;
  double specific_scale = 1.0;

  /// Noise level on the scaled data: entries N(0, noise^2 / n_m), so the
  /// expected noise energy of a scaled view is noise^2 * p.
  double noise = 0.0;
  /// Optional per-view override of \`noise\` (length M).
  std::vector<double> view_noise;
  /// Per-view label/first-specific-coordinate association in [0, 1]. Empty
  /// means no labels.
  std::vector<double> label_strength;
  std::uint64_t seed = 1;

  std::size_t num_views() const { return n.size(); }
  double noise_for(std::size_t m) const {
    return view_noise.empty() ? noise : view_noise.at(m);
  }
};

struct PlantedData {
  MultiViewDataset data;  // centered
  Factorization truth;    // noise-free generating factors
};

/// Draws U^0, W^0 jointly orthonormal and orthogonal to the all-ones vector
/// (so the signal is already centered), then
///   X_m = sqrt(n_m) (U^0 V*^T + W^0 V^0_m^T + E_m),
/// and centers columns. Labels: 1 iff w_i / sd(w) + (1 - strength) z_i exceeds
/// its median, where w is the first specific coordinate and z ~ N(0, 1).
/// Deterministic given the spec. Throws kRankTooLarge, kInvalidArgument.
PlantedData generate(const PlantSpec& spec);

/// Loading template with unit-norm columns scaled by `scale`. Entries on the
/// support have magnitude uniform in [0.5, 1] before normalisation and a
/// random sign.
Matrix random_loadings(Eigen::Index p, const Supports& supports,
                       Eigen::Index cols, double scale, std::uint64_t seed);

/// Polar factor A (A^T A)^{-1/2} via a symmetric eigendecomposition; an
/// algorithm independent of the solver's SVD path. At most 6 columns.
/// Throws kRankDeficient when A^T A is numerically singular.
Matrix oracle_polar(const Matrix& a);

/// argmin_v (v - target)^2 + 2 lambda |v| by grid search over
/// [-|target|, |target|] plus ternary refinement; accurate to ~1e-9.
double oracle_prox(double target, double lambda);

}  // namespace mvmf

#endif  // MVMF_SYNTHETIC_HPP_
