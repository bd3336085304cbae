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

#include <cmath>

#include "mvmf/errors.hpp"
#include "mvmf/synthetic.hpp"

namespace mvmf {

Matrix oracle_polar(const Matrix& a) {
  if (a.cols() > 6) {
    throw Error(Errc::kInvalidArgument, "oracle_polar handles at most 6 columns");
  }
  if (a.cols() > a.rows()) {
    throw Error(Errc::kDimensionMismatch, "oracle_polar needs rows >= cols");
  }
  if (a.cols() == 0) return Matrix(a.rows(), 0);
  const Matrix gram = a.transpose() * a;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  const Vector& values = eig.eigenvalues();  // ascending
  if (values(0) <= 1e-12 * values(values.size() - 1) || values(0) <= 0.0) {
    throw Error(Errc::kRankDeficient, "A^T A is numerically singular");
  }
  const Matrix& vecs = eig.eigenvectors();
  const Matrix inv_sqrt =
      vecs * values.cwiseSqrt().cwiseInverse().asDiagonal() * vecs.transpose();
  return a * inv_sqrt;
}

double oracle_prox(double target, double lambda) {
  const auto cost = [&](double v) {
    return (v - target) * (v - target) + 2.0 * lambda * std::abs(v);
  };
  const double half_width = std::abs(target);
  if (half_width == 0.0) return 0.0;

  constexpr int kSteps = 2000;  // even, so v = 0 lies on the grid
  const double h = 2.0 * half_width / kSteps;
  double best = -half_width;
  double best_cost = cost(best);
  for (int i = 1; i <= kSteps; ++i) {
    const double v = (i == kSteps / 2) ? 0.0 : -half_width + i * h;
    const double c = cost(v);
    if (c < best_cost) {
      best = v;
      best_cost = c;
    }
  }

  double lo = std::max(-half_width, best - h);
  double hi = std::min(half_width, best + h);
  for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (cost(m1) <= cost(m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  const double refined = 0.5 * (lo + hi);
  // keep an exact zero when the grid put the minimum on the kink
  return cost(best) <= cost(refined) ? best : refined;
}

}  // namespace mvmf
