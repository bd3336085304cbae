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

#ifndef MVMF_LINALG_HPP_
#define MVMF_LINALG_HPP_

#include <Eigen/Dense>

namespace mvmf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// sign(x) * max(|x| - lambda, 0)
inline double soft_threshold(double x, double lambda) {
  const double mag = (x < 0 ? -x : x) - lambda;
  if (mag <= 0.0) return 0.0;
  return x < 0 ? -mag : mag;
}

Vector soft_threshold(const Vector& x, double lambda);

/// Closest matrix with orthonormal columns to `a` in Frobenius norm, i.e. the
/// orthogonal factor P Q^T of the thin SVD P S Q^T. Requires rows >= cols.
///
/// Directions whose singular value falls below rel_cutoff * sigma_max are
/// completed deterministically: unit coordinate vectors e_1, e_2, ... are
/// Gram-Schmidt orthogonalised against the retained left singular vectors and
/// the first survivors are used. With an all-zero input the completion spans
/// the whole result.
Matrix polar_factor(const Matrix& a, double rel_cutoff = 1e-12);

/// Orthonormal basis of the column space of `a` (numerical rank by
/// rel_cutoff relative to the largest singular value).
Matrix orthonormal_basis(const Matrix& a, double rel_cutoff = 1e-12);

/// Principal angles (radians, ascending) between the column spaces of two
/// matrices of equal column rank. Computed from sines of the residual of one
/// basis projected onto the other, which stays accurate for tiny angles.
Vector principal_angles(const Matrix& a, const Matrix& b);

/// max_ij |a_ij - (i == j)|, zero for empty matrices.
double max_identity_deviation(const Matrix& gram);

/// max_ij |a_ij|, zero for empty matrices.
double max_abs(const Matrix& a);

}  // namespace mvmf

#endif  // MVMF_LINALG_HPP_
