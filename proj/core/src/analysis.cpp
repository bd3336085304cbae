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

#include "mvmf/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "mvmf/errors.hpp"

namespace mvmf {

Matrix ViewProjection::specific() const {
  const auto total = coordinates.cols();
  const auto r = static_cast<Eigen::Index>(std::count_if(
      axes.begin(), axes.end(),
      [](const std::string& a) { return a.rfind("specific-", 0) == 0; }));
  return coordinates.rightCols(std::min(r, total));
}

ProjectionSet project(const Factorization& f, const MultiViewDataset& ds) {
  validate_against(f, ds);
  ProjectionSet set;
  set.d = f.d;
  set.r = f.r;
  std::vector<std::string> axes;
  for (Eigen::Index k = 0; k < f.d; ++k) axes.push_back("shared-" + std::to_string(k + 1));
  for (Eigen::Index j = 0; j < f.r; ++j) axes.push_back("specific-" + std::to_string(j + 1));

  for (std::size_t m = 0; m < ds.num_views(); ++m) {
    const ViewMatrix& src = ds.view(m);
    const ViewFactors& vf = f.views[m];
    ViewProjection vp;
    vp.view = src.name;
    vp.subjects = src.subjects;
    vp.labels = src.labels;
    vp.axes = axes;
    vp.coordinates.resize(vf.U.rows(), f.d + f.r);
    vp.coordinates << vf.U, vf.W;
    vp.loadings.resize(f.V_star.rows(), f.d + f.r);
    vp.loadings << f.V_star, vf.V;
    const Matrix scaled = scaled_view(ds, m);
    vp.data_norm = scaled.norm();
    vp.residual_norm = (scaled - vp.coordinates * vp.loadings.transpose()).norm();
    set.views.push_back(std::move(vp));
  }
  return set;
}

LdaSummary lda_boundary(const Matrix& coords, std::span<const int> labels) {
  if (coords.cols() != 2) {
    throw Error(Errc::kDimensionMismatch, "LDA boundary needs 2-D coordinates");
  }
  if (static_cast<std::size_t>(coords.rows()) != labels.size()) {
    throw Error(Errc::kDimensionMismatch, "one label per coordinate row");
  }
  std::array<Eigen::Index, 2> size{0, 0};
  std::array<Eigen::Vector2d, 2> mean{Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero()};
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int c = labels[i];
    if (c != 0 && c != 1) throw Error(Errc::kDegenerateClass, "labels must be 0 or 1");
    ++size[static_cast<std::size_t>(c)];
    mean[static_cast<std::size_t>(c)] += coords.row(static_cast<Eigen::Index>(i)).transpose();
  }
  if (size[0] < 2 || size[1] < 2) {
    throw Error(Errc::kDegenerateClass, "each class needs at least 2 members");
  }
  mean[0] /= static_cast<double>(size[0]);
  mean[1] /= static_cast<double>(size[1]);

  Eigen::Matrix2d pooled = Eigen::Matrix2d::Zero();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const Eigen::Vector2d dev = coords.row(static_cast<Eigen::Index>(i)).transpose() -
                                mean[static_cast<std::size_t>(labels[i])];
    pooled += dev * dev.transpose();
  }
  pooled /= static_cast<double>(size[0] + size[1] - 2);
  const double trace = pooled.trace();
  if (!(trace > 0.0) || pooled.determinant() <= 1e-12 * trace * trace) {
    throw Error(Errc::kSingularCovariance, "pooled covariance is singular");
  }

  LdaSummary out;
  out.normal = pooled.ldlt().solve(mean[1] - mean[0]);
  out.offset = -out.normal.dot(0.5 * (mean[0] + mean[1]));

  std::array<std::array<Eigen::Index, 2>, 2> hits{};
  Eigen::Index correct = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const Eigen::Vector2d x = coords.row(static_cast<Eigen::Index>(i)).transpose();
    const int side = out.normal.dot(x) + out.offset > 0.0 ? 1 : 0;
    ++hits[static_cast<std::size_t>(labels[i])][static_cast<std::size_t>(side)];
    if (side == labels[i]) ++correct;
  }
  const double n = static_cast<double>(labels.size());
  out.accuracy = static_cast<double>(correct) / n;
  out.majority_prior = static_cast<double>(std::max(size[0], size[1])) / n;
  out.drawn = out.accuracy > out.majority_prior;
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t s = 0; s < 2; ++s) {
      out.percent[c][s] = 100.0 * static_cast<double>(hits[c][s]) /
                          static_cast<double>(size[c]);
    }
  }
  return out;
}

PcaBaseline pca_baseline(const MultiViewDataset& ds, std::size_t m, Eigen::Index k) {
  const Matrix scaled = scaled_view(ds, m);
  if (k < 1 || k > std::min(scaled.rows(), scaled.cols())) {
    throw Error(Errc::kInvalidArgument,
                "PCA component count must lie in [1, min(n, p)]");
  }
  Eigen::BDCSVD<Matrix> svd(scaled, Eigen::ComputeThinU);
  const double total = scaled.squaredNorm();
  PcaBaseline out;
  out.coordinates = svd.matrixU().leftCols(k);
  out.variance_ratio = svd.singularValues().head(k).array().square();
  if (total > 0.0) {
    out.variance_ratio /= total;
  } else {
    out.variance_ratio.setZero();
  }
  return out;
}

}  // namespace mvmf
