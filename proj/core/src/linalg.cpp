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

#include "mvmf/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "mvmf/errors.hpp"

namespace mvmf {

Vector soft_threshold(const Vector& x, double lambda) {
  Vector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out(i) = soft_threshold(x(i), lambda);
  return out;
}

namespace {

// Extends the orthonormal columns of `basis` (n x k, only the first `filled`
// columns valid) with unit coordinate vectors in index order.
void complete_basis(Matrix& basis, Eigen::Index filled) {
  const Eigen::Index n = basis.rows();
  Eigen::Index next = filled;
  for (Eigen::Index e = 0; e < n && next < basis.cols(); ++e) {
    Vector v = Vector::Unit(n, e);
    // two passes of classical Gram-Schmidt
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index j = 0; j < next; ++j) {
        v -= basis.col(j).dot(v) * basis.col(j);
      }
    }
    const double norm = v.norm();
    if (norm < 1e-8) continue;
    basis.col(next++) = v / norm;
  }
}

}  // namespace

Matrix polar_factor(const Matrix& a, double rel_cutoff) {
  const Eigen::Index n = a.rows();
  const Eigen::Index q = a.cols();
  if (q > n) {
    throw Error(Errc::kDimensionMismatch,
                "polar_factor: more columns than rows");
  }
  if (q == 0) return Matrix(n, 0);

  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sigma = svd.singularValues();
  const double cutoff = rel_cutoff * sigma(0);
  Eigen::Index kept = 0;
  while (kept < q && sigma(kept) > cutoff && sigma(kept) > 0.0) ++kept;

  Matrix left(n, q);
  left.leftCols(kept) = svd.matrixU().leftCols(kept);
  if (kept < q) complete_basis(left, kept);
  return left * svd.matrixV().transpose();
}

Matrix orthonormal_basis(const Matrix& a, double rel_cutoff) {
  if (a.cols() == 0) return Matrix(a.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU);
  const Vector& sigma = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < sigma.size() && sigma(rank) > rel_cutoff * sigma(0) &&
         sigma(rank) > 0.0) {
    ++rank;
  }
  return svd.matrixU().leftCols(rank);
}

Vector principal_angles(const Matrix& a, const Matrix& b) {
  const Matrix qa = orthonormal_basis(a);
  const Matrix qb = orthonormal_basis(b);
  if (qa.cols() != qb.cols()) {
    throw Error(Errc::kDimensionMismatch,
                "principal_angles: column spaces have different rank");
  }
  const Eigen::Index k = qa.cols();
  if (k == 0) return Vector(0);
  const Matrix residual = qb - qa * (qa.transpose() * qb);
  Eigen::JacobiSVD<Matrix> svd(residual);
  Vector angles(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    angles(i) = std::asin(std::min(1.0, svd.singularValues()(i)));
  }
  std::sort(angles.data(), angles.data() + k);
  return angles;
}

double max_identity_deviation(const Matrix& gram) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < gram.cols(); ++j) {
    for (Eigen::Index i = 0; i < gram.rows(); ++i) {
      const double target = (i == j) ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(gram(i, j) - target));
    }
  }
  return worst;
}

double max_abs(const Matrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

}  // namespace mvmf
