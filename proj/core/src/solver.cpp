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

#include "mvmf/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mvmf/errors.hpp"

namespace mvmf {

namespace {

std::vector<Matrix> all_scaled_views(const MultiViewDataset& ds) {
  if (!ds.centered()) {
    throw Error(Errc::kNotCentered, "fitting requires a centered dataset");
  }
  std::vector<Matrix> out;
  out.reserve(ds.num_views());
  for (std::size_t m = 0; m < ds.num_views(); ++m) out.push_back(scaled_view(ds, m));
  return out;
}

void project_all(Factorization& f, const std::vector<Matrix>& scaled) {
  for (std::size_t m = 0; m < scaled.size(); ++m) {
    ViewFactors& v = f.views[m];
    Matrix loadings(f.V_star.rows(), f.d + f.r);
    loadings << f.V_star, v.V;
    const Matrix coords = polar_factor(scaled[m] * loadings);
    v.U = coords.leftCols(f.d);
    v.W = coords.rightCols(f.r);
  }
}

void load_all(Factorization& f, const std::vector<Matrix>& scaled,
              const Penalty& pen, Penalty* implied) {
  const double violation = max_constraint_violation(f);
  if (violation > kOrthogonalityTol) {
    throw Error(Errc::kConstraintViolated,
                "loading update needs orthonormal coordinates (violation " +
                    std::to_string(violation) + ")");
  }
  const std::size_t views = scaled.size();
  const bool count = pen.mode == PenaltyMode::kCount;
  Penalty applied;
  applied.lambda_star = Vector::Zero(f.d);
  applied.lambda_view.assign(views, Vector::Zero(f.r));

  Matrix shared_target = Matrix::Zero(f.V_star.rows(), f.d);
  for (std::size_t m = 0; m < views; ++m) {
    shared_target.noalias() += scaled[m].transpose() * f.views[m].U;
  }
  shared_target /= static_cast<double>(views);
  for (Eigen::Index k = 0; k < f.d; ++k) {
    double lambda = 0.0;
    if (count) {
      f.V_star.col(k) = keep_top_k(shared_target.col(k), pen.k, &lambda);
    } else {
      lambda = pen.shared_weight(k);
      f.V_star.col(k) = soft_threshold(Vector(shared_target.col(k)), lambda);
    }
    applied.lambda_star(k) = lambda;
  }

  for (std::size_t m = 0; m < views; ++m) {
    const Matrix target = scaled[m].transpose() * f.views[m].W;
    for (Eigen::Index j = 0; j < f.r; ++j) {
      double lambda = 0.0;
      if (count) {
        f.views[m].V.col(j) = keep_top_k(target.col(j), pen.k, &lambda);
      } else {
        lambda = pen.view_weight(m, j);
        f.views[m].V.col(j) = soft_threshold(Vector(target.col(j)), lambda);
      }
      applied.lambda_view[m](j) = lambda;
    }
  }
  if (implied) *implied = std::move(applied);
}

double objective_from_scaled(const Factorization& f,
                             const std::vector<Matrix>& scaled,
                             const Penalty& weights) {
  double value = 0.0;
  for (std::size_t m = 0; m < scaled.size(); ++m) {
    const ViewFactors& v = f.views[m];
    value += (scaled[m] - v.U * f.V_star.transpose() - v.W * v.V.transpose())
                 .squaredNorm();
  }
  const double views = static_cast<double>(scaled.size());
  for (Eigen::Index k = 0; k < f.d; ++k) {
    value += 2.0 * views * weights.shared_weight(k) * f.V_star.col(k).lpNorm<1>();
  }
  for (std::size_t m = 0; m < scaled.size(); ++m) {
    for (Eigen::Index j = 0; j < f.r; ++j) {
      value += 2.0 * weights.view_weight(m, j) * f.views[m].V.col(j).lpNorm<1>();
    }
  }
  return value;
}

}  // namespace

void FitConfig::validate() const {
  if (d < 0 || r < 0 || d + r < 1) {
    throw Error(Errc::kInvalidArgument, "ranks need d, r >= 0 and d + r >= 1");
  }
  if (max_iters < 1) throw Error(Errc::kInvalidArgument, "max_iters must be >= 1");
  if (!(rel_tol > 0.0)) throw Error(Errc::kInvalidArgument, "rel_tol must be > 0");
}

Vector keep_top_k(const Vector& target, Eigen::Index k, double* threshold) {
  const Eigen::Index p = target.size();
  if (k >= p) {
    if (threshold) *threshold = 0.0;
    return target;
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(target(a)) > std::abs(target(b));
  });
  const double kth = std::abs(target(order[static_cast<std::size_t>(k - 1)]));
  double below = 0.0;
  for (std::size_t i = static_cast<std::size_t>(k); i < order.size(); ++i) {
    const double a = std::abs(target(order[i]));
    if (a < kth) {
      below = a;
      break;
    }
  }
  const double lambda = 0.5 * (kth + below);
  Vector out = Vector::Zero(p);
  for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) {
    const Eigen::Index j = order[i];
    out(j) = soft_threshold(target(j), lambda);
  }
  if (threshold) *threshold = lambda;
  return out;
}

Factorization init(const MultiViewDataset& ds, const FitConfig& cfg) {
  cfg.validate();
  const std::vector<Matrix> scaled = all_scaled_views(ds);
  const Eigen::Index d = cfg.d, r = cfg.r, p = ds.num_regions();
  if (d + r > ds.max_total_rank()) {
    throw Error(Errc::kRankTooLarge,
                "d + r = " + std::to_string(d + r) + " exceeds min(n_m, p) = " +
                    std::to_string(ds.max_total_rank()));
  }

  Eigen::Index stacked_rows = 0;
  for (const Matrix& x : scaled) stacked_rows += x.rows();
  Matrix stacked(stacked_rows, p);
  Eigen::Index offset = 0;
  for (const Matrix& x : scaled) {
    stacked.middleRows(offset, x.rows()) = x;
    offset += x.rows();
  }
  Eigen::BDCSVD<Matrix> svd(stacked, Eigen::ComputeThinV);
  const Vector& sigma = svd.singularValues();
  if (sigma.size() < d + r || sigma(0) <= 0.0 ||
      sigma(d + r - 1) <= 1e-12 * sigma(0)) {
    throw Error(Errc::kDegenerateData,
                "stacked data has rank below d + r = " + std::to_string(d + r));
  }

  Factorization f;
  f.d = d;
  f.r = r;
  const Matrix shared_dirs = svd.matrixV().leftCols(d);
  f.V_star = shared_dirs * sigma.head(d).asDiagonal() /
             std::sqrt(static_cast<double>(scaled.size()));

  for (const Matrix& x : scaled) {
    ViewFactors v;
    const Matrix residual = x - (x * shared_dirs) * shared_dirs.transpose();
    if (r > 0) {
      Eigen::BDCSVD<Matrix> res_svd(residual, Eigen::ComputeThinV);
      v.V = res_svd.matrixV().leftCols(r) *
            res_svd.singularValues().head(r).asDiagonal();
    } else {
      v.V = Matrix(p, 0);
    }
    f.views.push_back(std::move(v));
  }
  project_all(f, scaled);
  return f;
}

Factorization update_projections(const Factorization& f,
                                 const MultiViewDataset& ds) {
  validate_against(f, ds);
  Factorization out = f;
  project_all(out, all_scaled_views(ds));
  return out;
}

Factorization update_loadings(const Factorization& f,
                              const MultiViewDataset& ds, const Penalty& pen,
                              Penalty* implied) {
  validate_against(f, ds);
  pen.validate(ds.num_views(), f.d, f.r, ds.num_regions());
  Factorization out = f;
  load_all(out, all_scaled_views(ds), pen, implied);
  return out;
}

FitResult fit(const MultiViewDataset& ds, const FitConfig& cfg) {
  cfg.validate();
  cfg.penalty.validate(ds.num_views(), cfg.d, cfg.r, ds.num_regions());
  const std::vector<Matrix> scaled = all_scaled_views(ds);

  FitResult result;
  result.model = init(ds, cfg);
  Factorization& f = result.model;
  FitTrace& trace = result.trace;

  const bool count = cfg.penalty.mode == PenaltyMode::kCount;
  Penalty weights = count ? Penalty::none() : cfg.penalty;

  trace.objective.push_back(objective_from_scaled(f, scaled, weights));
  trace.max_violation.push_back(max_constraint_violation(f));
  const double scale = trace.objective.front();
  if (!(scale > 0.0)) trace.converged = true;

  for (int it = 1; it <= cfg.max_iters && !trace.converged; ++it) {
    project_all(f, scaled);
    trace.projection_objective.push_back(objective_from_scaled(f, scaled, weights));

    load_all(f, scaled, cfg.penalty, count ? &weights : nullptr);
    const double value = objective_from_scaled(f, scaled, weights);
    const double previous = trace.objective.back();
    trace.objective.push_back(value);
    trace.max_violation.push_back(max_constraint_violation(f));
    trace.iterations = it;

    if (std::abs(previous - value) / scale < cfg.rel_tol) trace.converged = true;
  }
  result.effective_penalty = count ? weights : cfg.penalty;
  if (count && trace.iterations == 0) {
    result.effective_penalty = Penalty::uniform(ds.num_views(), cfg.d, cfg.r, 0, 0);
  }
  return result;
}

}  // namespace mvmf
