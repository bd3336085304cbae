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

#include "mvmf/factor_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mvmf/errors.hpp"

namespace mvmf {

namespace {

std::string shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void expect_shape(const Matrix& m, Eigen::Index rows, Eigen::Index cols,
                  const char* what, std::size_t view) {
  if (m.rows() != rows || m.cols() != cols) {
    throw Error(Errc::kDimensionMismatch,
                std::string(what) + " of view " + std::to_string(view) +
                    " is " + shape(m) + ", expected " + std::to_string(rows) +
                    "x" + std::to_string(cols));
  }
}

}  // namespace

void validate_shapes(const Factorization& f) {
  if (f.d < 0 || f.r < 0) {
    throw Error(Errc::kDimensionMismatch, "ranks must be non-negative");
  }
  if (f.V_star.cols() != f.d) {
    throw Error(Errc::kDimensionMismatch, "V_star has " + shape(f.V_star) +
                                              " but d=" + std::to_string(f.d));
  }
  const Eigen::Index p = f.V_star.rows();
  for (std::size_t m = 0; m < f.views.size(); ++m) {
    const ViewFactors& v = f.views[m];
    const Eigen::Index n = v.U.rows();
    expect_shape(v.U, n, f.d, "U", m);
    expect_shape(v.W, n, f.r, "W", m);
    expect_shape(v.V, p, f.r, "V", m);
    if (f.d + f.r > std::min(n, p)) {
      throw Error(Errc::kRankTooLarge,
                  "d + r = " + std::to_string(f.d + f.r) +
                      " exceeds min(n, p) for view " + std::to_string(m));
    }
  }
}

void validate_against(const Factorization& f, const MultiViewDataset& ds) {
  validate_shapes(f);
  if (f.num_views() != ds.num_views()) {
    throw Error(Errc::kDimensionMismatch,
                "factorization has " + std::to_string(f.num_views()) +
                    " views, dataset has " + std::to_string(ds.num_views()));
  }
  if (f.num_regions() != ds.num_regions()) {
    throw Error(Errc::kDimensionMismatch,
                "factorization has " + std::to_string(f.num_regions()) +
                    " regions, dataset has " + std::to_string(ds.num_regions()));
  }
  for (std::size_t m = 0; m < ds.num_views(); ++m) {
    if (f.views[m].U.rows() != ds.view(m).rows()) {
      throw Error(Errc::kDimensionMismatch,
                  "view " + std::to_string(m) + " row count differs");
    }
  }
}

double max_constraint_violation(const Factorization& f) {
  double worst = 0.0;
  for (const ViewFactors& v : f.views) {
    worst = std::max(worst, max_identity_deviation(v.U.transpose() * v.U));
    worst = std::max(worst, max_identity_deviation(v.W.transpose() * v.W));
    worst = std::max(worst, max_abs(v.U.transpose() * v.W));
  }
  return worst;
}

Factorization zero_factorization(const MultiViewDataset& ds, Eigen::Index d,
                                 Eigen::Index r) {
  if (d < 0 || r < 0 || d + r > ds.max_total_rank()) {
    throw Error(Errc::kRankTooLarge, "d + r exceeds min(n_m, p)");
  }
  Factorization f;
  f.d = d;
  f.r = r;
  f.V_star = Matrix::Zero(ds.num_regions(), d);
  for (const ViewMatrix& view : ds.views()) {
    const Matrix axes = Matrix::Identity(view.rows(), d + r);
    f.views.push_back({axes.leftCols(d), axes.rightCols(r),
                       Matrix::Zero(ds.num_regions(), r)});
  }
  return f;
}

Penalty Penalty::uniform(std::size_t views, Eigen::Index d, Eigen::Index r,
                         double shared, double specific) {
  Penalty pen;
  pen.lambda_star = Vector::Constant(d, shared);
  pen.lambda_view.assign(views, Vector::Constant(r, specific));
  return pen;
}

Penalty Penalty::count(Eigen::Index k) {
  Penalty pen;
  pen.mode = PenaltyMode::kCount;
  pen.k = k;
  return pen;
}

void Penalty::validate(std::size_t views, Eigen::Index d, Eigen::Index r,
                       Eigen::Index p) const {
  if (mode == PenaltyMode::kCount) {
    if (k < 1 || k > p) {
      throw Error(Errc::kInvalidArgument,
                  "count-mode k must lie in [1, p], got " + std::to_string(k));
    }
    return;
  }
  if (lambda_star.size() != 0 && lambda_star.size() != d) {
    throw Error(Errc::kInvalidArgument, "lambda_star must have length d");
  }
  if (lambda_star.size() != 0 && (lambda_star.array() < 0.0).any()) {
    throw Error(Errc::kInvalidArgument, "penalty weights must be >= 0");
  }
  if (!lambda_view.empty() && lambda_view.size() != views) {
    throw Error(Errc::kInvalidArgument, "lambda_view must have one entry per view");
  }
  for (const Vector& lv : lambda_view) {
    if (lv.size() != 0 && lv.size() != r) {
      throw Error(Errc::kInvalidArgument, "lambda_view[m] must have length r");
    }
    if (lv.size() != 0 && (lv.array() < 0.0).any()) {
      throw Error(Errc::kInvalidArgument, "penalty weights must be >= 0");
    }
  }
}

double Penalty::shared_weight(Eigen::Index col) const {
  return lambda_star.size() == 0 ? 0.0 : lambda_star(col);
}

double Penalty::view_weight(std::size_t m, Eigen::Index col) const {
  if (lambda_view.empty() || lambda_view[m].size() == 0) return 0.0;
  return lambda_view[m](col);
}

Matrix reconstruct(const Factorization& f, std::size_t m) {
  if (m >= f.views.size()) {
    throw Error(Errc::kViewIndexOutOfRange,
                "view index " + std::to_string(m) + " out of range");
  }
  const ViewFactors& v = f.views[m];
  return v.U * f.V_star.transpose() + v.W * v.V.transpose();
}

double reconstruction_error(const Factorization& f, const MultiViewDataset& ds) {
  validate_against(f, ds);
  double loss = 0.0;
  for (std::size_t m = 0; m < ds.num_views(); ++m) {
    loss += (scaled_view(ds, m) - reconstruct(f, m)).squaredNorm();
  }
  return loss;
}

double objective(const Factorization& f, const MultiViewDataset& ds,
                 const Penalty& pen) {
  if (pen.mode == PenaltyMode::kCount) {
    throw Error(Errc::kInvalidArgument,
                "objective needs explicit weights; count mode has none");
  }
  pen.validate(ds.num_views(), f.d, f.r, ds.num_regions());
  double value = reconstruction_error(f, ds);
  const double views = static_cast<double>(ds.num_views());
  for (Eigen::Index k = 0; k < f.d; ++k) {
    value += 2.0 * views * pen.shared_weight(k) * f.V_star.col(k).lpNorm<1>();
  }
  for (std::size_t m = 0; m < ds.num_views(); ++m) {
    for (Eigen::Index j = 0; j < f.r; ++j) {
      value += 2.0 * pen.view_weight(m, j) * f.views[m].V.col(j).lpNorm<1>();
    }
  }
  return value;
}

VarianceReport compute_variance(const Factorization& f,
                                const MultiViewDataset& ds) {
  validate_against(f, ds);
  const double violation = max_constraint_violation(f);
  if (violation > kOrthogonalityTol) {
    throw Error(Errc::kConstraintViolated,
                "orthogonality violated by " + std::to_string(violation));
  }
  VarianceReport report;
  report.shared_by_region = f.V_star.rowwise().squaredNorm();
  const double shared = f.V_star.squaredNorm();
  for (std::size_t m = 0; m < ds.num_views(); ++m) {
    ViewVariance vv;
    vv.total = total_variance(ds, m);
    vv.shared = shared;
    vv.specific_by_region = f.views[m].V.rowwise().squaredNorm();
    vv.specific = f.views[m].V.squaredNorm();
    if (vv.total > 0.0) {
      vv.shared_fraction = vv.shared / vv.total;
      vv.specific_fraction = vv.specific / vv.total;
    }
    vv.over_one = vv.shared_fraction > 1.0 || vv.specific_fraction > 1.0;
    report.views.push_back(std::move(vv));
  }
  return report;
}

}  // namespace mvmf
