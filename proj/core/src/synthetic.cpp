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

#include "mvmf/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "mvmf/errors.hpp"

namespace mvmf {

namespace {

Matrix gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix out(rows, cols);
  // column-major fill order is part of the determinism contract
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = normal(rng);
  }
  return out;
}

Matrix fill_loadings(Eigen::Index p, const Supports& supports, Eigen::Index cols,
                     double scale, std::mt19937_64& rng) {
  if (!supports.empty() && static_cast<Eigen::Index>(supports.size()) != cols) {
    throw Error(Errc::kInvalidArgument, "one support list per loading column");
  }
  std::uniform_real_distribution<double> magnitude(0.5, 1.0);
  std::bernoulli_distribution flip(0.5);
  Matrix out = Matrix::Zero(p, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    std::vector<Eigen::Index> rows;
    if (supports.empty() || supports[static_cast<std::size_t>(j)].empty()) {
      for (Eigen::Index i = 0; i < p; ++i) rows.push_back(i);
    } else {
      rows = supports[static_cast<std::size_t>(j)];
    }
    for (Eigen::Index i : rows) {
      if (i < 0 || i >= p) {
        throw Error(Errc::kInvalidArgument,
                    "support index " + std::to_string(i) + " outside [0, p)");
      }
      const double mag = magnitude(rng);
      out(i, j) = flip(rng) ? -mag : mag;
    }
    const double norm = out.col(j).norm();
    if (norm > 0.0) out.col(j) *= scale / norm;
  }
  return out;
}

std::string subject_id(std::size_t m, Eigen::Index i) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "v%zu_s%04ld", m + 1, static_cast<long>(i + 1));
  return buf;
}

}  // namespace

Matrix random_loadings(Eigen::Index p, const Supports& supports, Eigen::Index cols,
                       double scale, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return fill_loadings(p, supports, cols, scale, rng);
}

PlantedData generate(const PlantSpec& spec) {
  const std::size_t views = spec.num_views();
  const Eigen::Index p = spec.p, d = spec.d, r = spec.r;
  if (views == 0 || p < 1 || d < 0 || r < 0) {
    throw Error(Errc::kInvalidArgument, "plant spec needs M >= 1, p >= 1, d, r >= 0");
  }
  if (!spec.view_noise.empty() && spec.view_noise.size() != views) {
    throw Error(Errc::kInvalidArgument, "one noise level per view");
  }
  for (std::size_t m = 0; m < views; ++m) {
    if (!(spec.noise_for(m) >= 0.0)) {
      throw Error(Errc::kInvalidArgument, "noise must be >= 0");
    }
  }
  for (Eigen::Index n : spec.n) {
    // one extra dimension is spent on the all-ones direction
    if (d + r > std::min(n - 1, p)) {
      throw Error(Errc::kRankTooLarge,
                  "d + r = " + std::to_string(d + r) +
                      " exceeds min(n_m - 1, p) for a view with n_m = " +
                      std::to_string(n));
    }
  }
  if (!spec.label_strength.empty()) {
    if (spec.label_strength.size() != views) {
      throw Error(Errc::kInvalidArgument, "one label strength per view");
    }
    if (r < 1) throw Error(Errc::kInvalidArgument, "labels need r >= 1");
    for (double s : spec.label_strength) {
      if (s < 0.0 || s > 1.0) {
        throw Error(Errc::kInvalidArgument, "label strength must lie in [0, 1]");
      }
    }
  }

  std::mt19937_64 rng(spec.seed);

  Factorization truth;
  truth.d = d;
  truth.r = r;
  if (spec.shared_loadings.size() > 0) {
    if (spec.shared_loadings.rows() != p || spec.shared_loadings.cols() != d) {
      throw Error(Errc::kDimensionMismatch, "shared loadings must be p x d");
    }
    truth.V_star = spec.shared_loadings;
  } else {
    truth.V_star = fill_loadings(p, spec.shared_support, d, spec.shared_scale, rng);
  }
  std::vector<Matrix> specific(views);
  for (std::size_t m = 0; m < views; ++m) {
    if (!spec.specific_loadings.empty()) {
      if (spec.specific_loadings.size() != views ||
          spec.specific_loadings[m].rows() != p ||
          spec.specific_loadings[m].cols() != r) {
        throw Error(Errc::kDimensionMismatch, "specific loadings must be M blocks of p x r");
      }
      specific[m] = spec.specific_loadings[m];
    } else {
      const Supports none;
      const Supports& sup =
          spec.specific_support.empty() ? none : spec.specific_support.at(m);
      specific[m] = fill_loadings(p, sup, r, spec.specific_scale, rng);
    }
  }

  std::vector<ViewMatrix> data_views;
  for (std::size_t m = 0; m < views; ++m) {
    const Eigen::Index n = spec.n[m];
    const double root_n = std::sqrt(static_cast<double>(n));

    Matrix basis(n, d + r + 1);
    basis.col(0).setConstant(1.0 / root_n);
    basis.rightCols(d + r) = gaussian(n, d + r, rng);
    Eigen::HouseholderQR<Matrix> qr(basis);
    const Matrix q = qr.householderQ() * Matrix::Identity(n, d + r + 1);
    const Matrix coords = q.rightCols(d + r);

    ViewFactors vf;
    vf.U = coords.leftCols(d);
    vf.W = coords.rightCols(r);
    vf.V = specific[m];

    Matrix scaled = vf.U * truth.V_star.transpose() + vf.W * vf.V.transpose();
    const double noise = spec.noise_for(m);
    if (noise > 0.0) scaled += (noise / root_n) * gaussian(n, p, rng);

    ViewMatrix view;
    view.name = "view" + std::to_string(m + 1);
    for (Eigen::Index i = 0; i < n; ++i) view.subjects.push_back(subject_id(m, i));
    view.values = root_n * scaled;

    if (!spec.label_strength.empty()) {
      const Vector w = vf.W.col(0);
      const double sd = std::sqrt((w.array() - w.mean()).square().mean());
      const Vector jitter = gaussian(n, 1, rng);
      const double spread = 1.0 - spec.label_strength[m];
      Vector score(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        score(i) = (sd > 0.0 ? w(i) / sd : 0.0) + spread * jitter(i);
      }
      std::vector<double> sorted(score.data(), score.data() + n);
      std::sort(sorted.begin(), sorted.end());
      const auto half = static_cast<std::size_t>(n / 2);
      const double median = (n % 2 == 1) ? sorted[half]
                                         : 0.5 * (sorted[half - 1] + sorted[half]);
      std::vector<int> labels(static_cast<std::size_t>(n));
      for (Eigen::Index i = 0; i < n; ++i) {
        labels[static_cast<std::size_t>(i)] = score(i) > median ? 1 : 0;
      }
      view.labels = std::move(labels);
    }

    truth.views.push_back(std::move(vf));
    data_views.push_back(std::move(view));
  }

  std::vector<std::string> regions;
  for (Eigen::Index j = 0; j < p; ++j) regions.push_back("r" + std::to_string(j + 1));
  MultiViewDataset raw(std::move(data_views), std::move(regions), false);
  return {center_columns(raw), std::move(truth)};
}

}  // namespace mvmf
