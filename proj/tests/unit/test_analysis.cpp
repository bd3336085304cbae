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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "mvmf/analysis.hpp"
#include "mvmf/errors.hpp"
#include "mvmf/solver.hpp"
#include "mvmf/synthetic.hpp"
#include "planted_specs.hpp"
#include "test_support.hpp"

using mvmf::LdaSummary;
using mvmf::Matrix;
using mvmf::testing::max_diff;

namespace {

mvmf::Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const mvmf::Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return mvmf::Errc::kIoError;
}

Matrix two_clouds(std::mt19937_64& rng, Eigen::Index per_class, double gap,
                  std::vector<int>& labels) {
  Matrix x = mvmf::testing::gaussian(2 * per_class, 2, rng);
  labels.assign(static_cast<std::size_t>(2 * per_class), 0);
  for (Eigen::Index i = per_class; i < 2 * per_class; ++i) {
    x(i, 0) += gap;
    labels[static_cast<std::size_t>(i)] = 1;
  }
  return x;
}

}  // namespace

TEST_CASE("project copies coordinates and loadings") {
  std::mt19937_64 rng(1);
  const auto ds = mvmf::testing::random_dataset({3, 5}, 4, rng);
  const auto f = mvmf::testing::random_factorization(ds, 1, 1, rng);
  const auto set = mvmf::project(f, ds);
  CHECK(set.d == 1);
  CHECK(set.r == 1);
  REQUIRE(set.views.size() == 2);
  const auto& v = set.views[0];
  CHECK(v.view == ds.view(0).name);
  CHECK(v.subjects == ds.view(0).subjects);
  CHECK(v.axes == std::vector<std::string>{"shared-1", "specific-1"});
  REQUIRE(v.coordinates.rows() == 3);
  REQUIRE(v.coordinates.cols() == 2);
  CHECK(v.coordinates.col(0) == f.views[0].U.col(0));
  CHECK(v.coordinates.col(1) == f.views[0].W.col(0));
  CHECK(v.loadings.col(0) == f.V_star.col(0));
  CHECK(v.loadings.col(1) == f.views[0].V.col(0));
  CHECK(v.specific() == f.views[0].W);
  CHECK(v.data_norm == doctest::Approx(mvmf::scaled_view(ds, 0).norm()));
  CHECK(v.residual_norm ==
        doctest::Approx((mvmf::scaled_view(ds, 0) - mvmf::reconstruct(f, 0)).norm()));

  SUBCASE("mismatched factorization") {
    const auto other = mvmf::testing::random_dataset({3, 5}, 6, rng);
    CHECK_THROWS_AS(mvmf::project(f, other), mvmf::Error);
  }
}

TEST_CASE("project on noiseless planted data") {
  mvmf::PlantSpec spec;
  spec.n = {30, 25};
  spec.p = 12;
  spec.d = 1;
  spec.r = 2;
  spec.seed = 4;
  const auto planted = mvmf::generate(spec);

  SUBCASE("generating factors reproduce the data") {
    for (const auto& v : mvmf::project(planted.truth, planted.data).views) {
      CHECK(v.residual_norm <= 1e-8 * v.data_norm);
    }
  }
  SUBCASE("fitted factors reproduce the data") {
    mvmf::FitConfig cfg;
    cfg.d = 1;
    cfg.r = 2;
    cfg.rel_tol = 1e-15;
    cfg.max_iters = 20000;
    const auto fitted = mvmf::fit(planted.data, cfg);
    for (const auto& v : mvmf::project(fitted.model, planted.data).views) {
      CHECK(v.residual_norm <= 1e-8 * v.data_norm);
      CHECK(v.coordinates.rowwise().norm().maxCoeff() <= 1.0 + 1e-8);
    }
  }
}

TEST_CASE("coordinate rows never exceed unit norm") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto ds = mvmf::testing::random_dataset({6, 9}, 5, rng);
    const auto f = mvmf::testing::random_factorization(ds, 2, 2, rng);
    for (const auto& v : mvmf::project(f, ds).views) {
      CHECK(v.coordinates.rowwise().norm().maxCoeff() <= 1.0 + 1e-8);
    }
  }
}

TEST_CASE("LDA on mirror-symmetric clouds") {
  Matrix x(8, 2);
  x << -3, 0, -3, 1, -4, -1, -2, 2,  //
      3, 0, 3, 1, 4, -1, 2, 2;
  const std::vector<int> labels = {0, 0, 0, 0, 1, 1, 1, 1};
  const LdaSummary s = mvmf::lda_boundary(x, labels);
  CHECK(std::abs(s.normal(1)) <= 1e-12 * std::abs(s.normal(0)));
  CHECK(s.normal(0) > 0.0);
  CHECK(std::abs(s.offset) <= 1e-12);
  CHECK(s.accuracy == 1.0);
  CHECK(s.drawn);
  CHECK(s.percent[0][0] == 100.0);
  CHECK(s.percent[0][1] == 0.0);
  CHECK(s.percent[1][0] == 0.0);
  CHECK(s.percent[1][1] == 100.0);
}

TEST_CASE("LDA drawn flag on shuffled labels") {
  std::mt19937_64 rng(3);
  int not_drawn = 0;
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<int> labels;
    const Matrix x = two_clouds(rng, 15, 0.0, labels);
    labels[15] = 0;  // 16 : 14 split
    std::shuffle(labels.begin(), labels.end(), rng);
    const LdaSummary s = mvmf::lda_boundary(x, labels);
    CHECK(s.majority_prior == doctest::Approx(16.0 / 30.0));
    CHECK(s.drawn == (s.accuracy > s.majority_prior));
    if (!s.drawn) ++not_drawn;
  }
  CHECK(not_drawn > 0);
}

TEST_CASE("LDA matches an explicit 2x2 inverse") {
  Matrix x(6, 2);
  x << 0.1, 0.4, -0.3, 0.2, 0.0, -0.5,  //
      0.9, 0.7, 1.2, 0.1, 0.6, 0.4;
  const std::vector<int> labels = {0, 0, 0, 1, 1, 1};
  const double m0x = (0.1 - 0.3 + 0.0) / 3, m0y = (0.4 + 0.2 - 0.5) / 3;
  const double m1x = (0.9 + 1.2 + 0.6) / 3, m1y = (0.7 + 0.1 + 0.4) / 3;
  double sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < 6; ++i) {
    const double dx = x(i, 0) - (i < 3 ? m0x : m1x);
    const double dy = x(i, 1) - (i < 3 ? m0y : m1y);
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  sxx /= 4;
  sxy /= 4;
  syy /= 4;
  const double det = sxx * syy - sxy * sxy;
  const double dmx = m1x - m0x, dmy = m1y - m0y;
  const double wx = (syy * dmx - sxy * dmy) / det;
  const double wy = (-sxy * dmx + sxx * dmy) / det;
  const double offset = -(wx * 0.5 * (m0x + m1x) + wy * 0.5 * (m0y + m1y));

  const LdaSummary s = mvmf::lda_boundary(x, labels);
  CHECK(s.normal(0) == doctest::Approx(wx).epsilon(1e-12));
  CHECK(s.normal(1) == doctest::Approx(wy).epsilon(1e-12));
  CHECK(s.offset == doctest::Approx(offset).epsilon(1e-12));
  int correct = 0;
  for (int i = 0; i < 6; ++i) {
    const int side = wx * x(i, 0) + wy * x(i, 1) + offset > 0 ? 1 : 0;
    correct += side == labels[static_cast<std::size_t>(i)];
  }
  CHECK(s.accuracy == doctest::Approx(correct / 6.0));
}

TEST_CASE("LDA is invariant to rotations of the plane") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> labels;
    const Matrix x = two_clouds(rng, 20, 1.5, labels);
    const LdaSummary base = mvmf::lda_boundary(x, labels);
    const double a = angle(rng);
    Eigen::Matrix2d rot;
    rot << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    const LdaSummary turned = mvmf::lda_boundary(x * rot.transpose(), labels);
    CHECK(std::abs(turned.accuracy - base.accuracy) <= 1e-9);
    for (int c = 0; c < 2; ++c) {
      for (int side = 0; side < 2; ++side) {
        CHECK(std::abs(turned.percent[c][side] - base.percent[c][side]) <= 1e-9);
      }
      CHECK(base.percent[c][0] + base.percent[c][1] == doctest::Approx(100.0));
    }
  }
}

TEST_CASE("LDA errors") {
  Matrix x(5, 2);
  x << 0, 1, 1, 0, 2, 2, 3, 1, 1, 3;
  CHECK(code_of([&] { mvmf::lda_boundary(x, std::vector<int>{0, 0, 0, 0, 1}); }) ==
        mvmf::Errc::kDegenerateClass);
  CHECK(code_of([&] { mvmf::lda_boundary(x, std::vector<int>{0, 0, 2, 1, 1}); }) ==
        mvmf::Errc::kDegenerateClass);
  CHECK(code_of([&] { mvmf::lda_boundary(x, std::vector<int>{0, 0, 1, 1}); }) ==
        mvmf::Errc::kDimensionMismatch);
  CHECK(code_of([&] { mvmf::lda_boundary(Matrix::Zero(5, 3), std::vector<int>{0, 0, 0, 1, 1}); }) ==
        mvmf::Errc::kDimensionMismatch);
  Matrix line(4, 2);
  line << 0, 0, 1, 2, 2, 4, 3, 6;
  CHECK(code_of([&] { mvmf::lda_boundary(line, std::vector<int>{0, 0, 1, 1}); }) ==
        mvmf::Errc::kSingularCovariance);
}

TEST_CASE("PCA baseline") {
  SUBCASE("rank-one view") {
    Matrix x(4, 3);
    x << 1, 2, 3, -1, -2, -3, 2, 4, 6, -2, -4, -6;
    const mvmf::MultiViewDataset ds({{"v", {"a", "b", "c", "d"}, x, {}}}, {"x", "y", "z"},
                                    true);
    const auto pca = mvmf::pca_baseline(ds, 0, 3);
    CHECK(pca.variance_ratio(0) == doctest::Approx(1.0));
    CHECK(std::abs(pca.variance_ratio(1)) < 1e-12);
    CHECK(std::abs(pca.variance_ratio(2)) < 1e-12);
  }
  SUBCASE("ratios are ordered and bounded") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
      const auto ds = mvmf::testing::random_dataset({9}, 6, rng);
      const auto pca = mvmf::pca_baseline(ds, 0, 6);
      CHECK(pca.variance_ratio.sum() <= 1.0 + 1e-12);
      for (Eigen::Index i = 1; i < 6; ++i) {
        CHECK(pca.variance_ratio(i) <= pca.variance_ratio(i - 1));
      }
      CHECK(max_diff(pca.coordinates.transpose() * pca.coordinates, Matrix::Identity(6, 6)) <
            1e-12);
    }
  }
  SUBCASE("4x3 example matches the gram eigendecomposition") {
    Matrix x(4, 3);
    x << 1.0, -0.5, 2.0, -0.3, 1.1, 0.4, 0.2, 0.7, -1.6, -0.9, -1.3, -0.8;
    const auto ds =
        mvmf::center_columns(mvmf::MultiViewDataset({{"v", {"a", "b", "c", "d"}, x, {}}},
                                                    {"x", "y", "z"}));
    const Matrix s = mvmf::scaled_view(ds, 0);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(s * s.transpose());
    const double total = eig.eigenvalues().sum();
    const auto pca = mvmf::pca_baseline(ds, 0, 2);
    for (Eigen::Index i = 0; i < 2; ++i) {
      const Eigen::Index e = 3 - i;  // eigenvalues ascend
      CHECK(pca.variance_ratio(i) == doctest::Approx(eig.eigenvalues()(e) / total));
      const double align = std::abs(pca.coordinates.col(i).dot(eig.eigenvectors().col(e)));
      CHECK(align == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
  SUBCASE("argument checks") {
    std::mt19937_64 rng(6);
    const auto ds = mvmf::testing::random_dataset({5, 5}, 3, rng);
    CHECK(code_of([&] { mvmf::pca_baseline(ds, 2, 1); }) == mvmf::Errc::kViewIndexOutOfRange);
    CHECK(code_of([&] { mvmf::pca_baseline(ds, 0, 0); }) == mvmf::Errc::kInvalidArgument);
    CHECK(code_of([&] { mvmf::pca_baseline(ds, 0, 4); }) == mvmf::Errc::kInvalidArgument);
  }
}

TEST_CASE("label association orders LDA accuracy across views") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto planted = mvmf::generate(mvmf::testing::label_spec(seed));
    mvmf::FitConfig cfg;
    cfg.d = 2;
    cfg.r = 2;
    const auto fitted = mvmf::fit(planted.data, cfg);
    const auto set = mvmf::project(fitted.model, planted.data);
    double previous = 0.0;
    for (const auto& v : set.views) {
      REQUIRE(v.labels.has_value());
      const auto s = mvmf::lda_boundary(v.specific(), *v.labels);
      CHECK(s.accuracy >= previous);
      previous = s.accuracy;
    }
  }
}
