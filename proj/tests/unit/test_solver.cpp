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
#include <random>

#include "doctest.h"
#include "mvmf/errors.hpp"
#include "mvmf/solver.hpp"
#include "mvmf/synthetic.hpp"
#include "test_support.hpp"

using mvmf::Factorization;
using mvmf::FitConfig;
using mvmf::Matrix;
using mvmf::Penalty;
using mvmf::Vector;
using mvmf::testing::max_diff;
using mvmf::testing::rel_diff;

namespace {

mvmf::PlantedData planted(std::uint64_t seed, double noise = 0.0) {
  mvmf::PlantSpec spec;
  spec.n = {40, 40, 40};
  spec.p = 15;
  spec.d = 2;
  spec.r = 2;
  spec.noise = noise;
  spec.seed = seed;
  return mvmf::generate(spec);
}

double relative_reconstruction_error(const Factorization& f, const mvmf::MultiViewDataset& ds) {
  double err = 0.0, energy = 0.0;
  for (std::size_t m = 0; m < ds.num_views(); ++m) {
    const Matrix x = mvmf::scaled_view(ds, m);
    err += (x - mvmf::reconstruct(f, m)).squaredNorm();
    energy += x.squaredNorm();
  }
  return std::sqrt(err / energy);
}

}  // namespace

TEST_CASE("keep_top_k") {
  Vector t(3);
  t << 3.0, -0.5, 1.0;
  double lambda = -1;
  Vector out = mvmf::keep_top_k(t, 2, &lambda);
  CHECK(lambda == doctest::Approx(0.75));
  CHECK(out(0) == doctest::Approx(2.25));
  CHECK(out(1) == 0.0);
  CHECK(out(2) == doctest::Approx(0.25));

  SUBCASE("ties keep the lower index") {
    Vector ties(4);
    ties << 1.0, -1.0, 1.0, 0.2;
    out = mvmf::keep_top_k(ties, 2, &lambda);
    CHECK(lambda == doctest::Approx(0.6));
    CHECK(out(0) == doctest::Approx(0.4));
    CHECK(out(1) == doctest::Approx(-0.4));
    CHECK(out(2) == 0.0);
    CHECK(out(3) == 0.0);
  }
  SUBCASE("all equal") {
    out = mvmf::keep_top_k(Vector::Constant(3, 2.0), 1, &lambda);
    CHECK(lambda == doctest::Approx(1.0));
    CHECK(out(0) == doctest::Approx(1.0));
    CHECK((out.array() != 0.0).count() == 1);
  }
  SUBCASE("k >= p keeps everything") {
    out = mvmf::keep_top_k(t, 3, &lambda);
    CHECK(lambda == 0.0);
    CHECK(out == t);
  }
  SUBCASE("exactly k nonzeros on random input") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
      const Vector x = mvmf::testing::gaussian(12, 1, rng);
      for (Eigen::Index k = 1; k <= 12; ++k) {
        CHECK((mvmf::keep_top_k(x, k, nullptr).array() != 0.0).count() == k);
      }
    }
  }
}

TEST_CASE("update_projections fixed point at the singular vectors") {
  std::mt19937_64 rng(1);
  const auto ds = mvmf::testing::random_dataset({6}, 3, rng);
  const Matrix x = mvmf::scaled_view(ds, 0);
  Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Factorization f;
  f.d = 1;
  f.r = 1;
  f.V_star = svd.matrixV().col(0) * svd.singularValues()(0);
  f.views.push_back({svd.matrixU().col(0), svd.matrixU().col(1),
                     svd.matrixV().col(1) * svd.singularValues()(1)});
  const Factorization g = mvmf::update_projections(f, ds);
  CHECK(max_diff(g.views[0].U, f.views[0].U) < 1e-10);
  CHECK(max_diff(g.views[0].W, f.views[0].W) < 1e-10);
  const Factorization h = mvmf::update_loadings(g, ds, Penalty::none());
  CHECK(max_diff(h.V_star, f.V_star) < 1e-10);
  CHECK(max_diff(h.views[0].V, f.views[0].V) < 1e-10);
}

TEST_CASE("update_projections agrees with the eigendecomposition polar oracle") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto ds = mvmf::testing::random_dataset({3}, 2, rng);
    const Factorization f = mvmf::testing::random_factorization(ds, 1, 1, rng);
    const Factorization g = mvmf::update_projections(f, ds);
    Matrix loadings(2, 2);
    loadings << f.V_star, f.views[0].V;
    const Matrix a = mvmf::scaled_view(ds, 0) * loadings;
    const Matrix expect = mvmf::oracle_polar(a);
    Matrix got(3, 2);
    got << g.views[0].U, g.views[0].W;
    CHECK(max_diff(got, expect) < 1e-8);
  }
}

TEST_CASE("update_loadings closed forms") {
  std::mt19937_64 rng(3);
  const auto ds = mvmf::testing::random_dataset({7, 9, 8}, 5, rng);
  const Factorization f = mvmf::testing::random_factorization(ds, 2, 2, rng);

  Matrix shared_target = Matrix::Zero(5, 2);
  for (std::size_t m = 0; m < 3; ++m) {
    shared_target += mvmf::scaled_view(ds, m).transpose() * f.views[m].U;
  }
  shared_target /= 3.0;

  SUBCASE("zero penalty is least squares") {
    const Factorization g = mvmf::update_loadings(f, ds, Penalty::none());
    CHECK(max_diff(g.V_star, shared_target) < 1e-13);
    for (std::size_t m = 0; m < 3; ++m) {
      CHECK(max_diff(g.views[m].V, mvmf::scaled_view(ds, m).transpose() * f.views[m].W) <
            1e-13);
    }
  }
  SUBCASE("every entry matches the 1-D grid-search minimiser") {
    Penalty pen;
    pen.lambda_star = Vector(2);
    pen.lambda_star << 0.05, 0.2;
    pen.lambda_view = {Vector::Constant(2, 0.1), Vector::Constant(2, 0.3),
                       Vector::Constant(2, 0.0)};
    const Factorization g = mvmf::update_loadings(f, ds, pen);
    for (Eigen::Index k = 0; k < 2; ++k) {
      for (Eigen::Index j = 0; j < 5; ++j) {
        CHECK(std::abs(g.V_star(j, k) -
                       mvmf::oracle_prox(shared_target(j, k), pen.lambda_star(k))) < 1e-6);
      }
    }
    for (std::size_t m = 0; m < 3; ++m) {
      const Matrix target = mvmf::scaled_view(ds, m).transpose() * f.views[m].W;
      for (Eigen::Index k = 0; k < 2; ++k) {
        for (Eigen::Index j = 0; j < 5; ++j) {
          CHECK(std::abs(g.views[m].V(j, k) -
                         mvmf::oracle_prox(target(j, k), pen.lambda_view[m](k))) < 1e-6);
        }
      }
    }
  }
  SUBCASE("no single-entry perturbation lowers the full objective") {
    const Penalty pen = Penalty::uniform(3, 2, 2, 0.08, 0.15);
    const Factorization g = mvmf::update_loadings(f, ds, pen);
    const double base = mvmf::objective(g, ds, pen);
    for (double step : {1e-3, -1e-3, 1e-5, -1e-5}) {
      for (Eigen::Index j = 0; j < 5; ++j) {
        for (Eigen::Index k = 0; k < 2; ++k) {
          Factorization h = g;
          h.V_star(j, k) += step;
          CHECK(mvmf::objective(h, ds, pen) >= base - 1e-12);
          h = g;
          h.views[1].V(j, k) += step;
          CHECK(mvmf::objective(h, ds, pen) >= base - 1e-12);
        }
      }
    }
  }
  SUBCASE("non-orthonormal coordinates are rejected") {
    Factorization bad = f;
    bad.views[0].U.col(0) *= 2.0;
    CHECK_THROWS_AS(mvmf::update_loadings(bad, ds, Penalty::none()), mvmf::Error);
  }
  SUBCASE("count mode leaves exactly k nonzeros per column") {
    Penalty implied;
    const Factorization g = mvmf::update_loadings(f, ds, Penalty::count(2), &implied);
    for (Eigen::Index k = 0; k < 2; ++k) CHECK((g.V_star.col(k).array() != 0).count() == 2);
    for (const auto& v : g.views) {
      for (Eigen::Index k = 0; k < 2; ++k) CHECK((v.V.col(k).array() != 0).count() == 2);
    }
    CHECK(implied.lambda_star.size() == 2);
    CHECK(implied.lambda_view.size() == 3);
    CHECK((implied.lambda_star.array() > 0).all());
  }
}

TEST_CASE("half-steps never increase the objective") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto ds = mvmf::testing::random_dataset({10, 12, 9}, 6, rng);
    const Factorization f = mvmf::testing::random_factorization(ds, 2, 1, rng);
    const Penalty pen = Penalty::uniform(3, 2, 1, 0.02 * trial, 0.05);
    const double before = mvmf::objective(f, ds, pen);
    const Factorization g = mvmf::update_projections(f, ds);
    const double mid = mvmf::objective(g, ds, pen);
    const Factorization h = mvmf::update_loadings(g, ds, pen);
    const double after = mvmf::objective(h, ds, pen);
    CHECK(mid <= before + 1e-12 * before);
    CHECK(after <= mid + 1e-12 * mid);
  }
}

TEST_CASE("init") {
  SUBCASE("planted data starts below the zero-loading energy") {
    const auto p = planted(5);
    FitConfig cfg;
    cfg.d = 2;
    cfg.r = 2;
    const Factorization f = mvmf::init(p.data, cfg);
    CHECK(mvmf::max_constraint_violation(f) < 1e-10);
    const double zero = mvmf::objective(mvmf::zero_factorization(p.data, 2, 2), p.data,
                                        Penalty::none());
    CHECK(mvmf::objective(f, p.data, Penalty::none()) < zero);
  }
  SUBCASE("rank too large") {
    std::mt19937_64 rng(6);
    const auto ds = mvmf::testing::random_dataset({5, 6}, 4, rng);
    FitConfig cfg;
    cfg.d = 3;
    cfg.r = 2;
    CHECK_THROWS_WITH_AS(mvmf::init(ds, cfg), doctest::Contains("exceeds"), mvmf::Error);
  }
  SUBCASE("all-zero data is degenerate") {
    mvmf::ViewMatrix v{"v", {"a", "b", "c"}, Matrix::Zero(3, 3), {}};
    const auto ds = mvmf::center_columns(mvmf::MultiViewDataset({v, v}, {"x", "y", "z"}));
    FitConfig cfg;
    try {
      mvmf::init(ds, cfg);
      FAIL("expected DegenerateData");
    } catch (const mvmf::Error& e) {
      CHECK(e.code() == mvmf::Errc::kDegenerateData);
    }
  }
  SUBCASE("requires centering") {
    mvmf::ViewMatrix v{"v", {"a", "b", "c"}, Matrix::Ones(3, 3), {}};
    const mvmf::MultiViewDataset raw({v}, {"x", "y", "z"});
    CHECK_THROWS_AS(mvmf::init(raw, FitConfig{}), mvmf::Error);
  }
  SUBCASE("config validation") {
    FitConfig cfg;
    cfg.d = 0;
    cfg.r = 0;
    CHECK_THROWS_AS(cfg.validate(), mvmf::Error);
    cfg.r = 1;
    cfg.max_iters = 0;
    CHECK_THROWS_AS(cfg.validate(), mvmf::Error);
    cfg.max_iters = 1;
    cfg.rel_tol = 0;
    CHECK_THROWS_AS(cfg.validate(), mvmf::Error);
  }
}

TEST_CASE("fit recovers noiseless planted factors") {
  const auto p = planted(7);
  FitConfig cfg;
  cfg.d = 2;
  cfg.r = 2;
  cfg.rel_tol = 1e-12;
  cfg.max_iters = 2000;
  const auto result = mvmf::fit(p.data, cfg);
  CHECK(result.trace.converged);
  CHECK(relative_reconstruction_error(result.model, p.data) <= 1e-6);
  CHECK(mvmf::principal_angles(result.model.V_star, p.truth.V_star).maxCoeff() <= 1e-4);
  for (std::size_t m = 0; m < 3; ++m) {
    CHECK(mvmf::principal_angles(result.model.views[m].V, p.truth.views[m].V).maxCoeff() <=
          1e-4);
  }
}

TEST_CASE("fit trace is monotone and stops on the relative decrease") {
  const auto p = planted(8, 0.2);
  FitConfig cfg;
  cfg.d = 2;
  cfg.r = 2;
  cfg.rel_tol = 1e-8;
  cfg.penalty = Penalty::uniform(3, 2, 2, 0.01, 0.02);
  const auto result = mvmf::fit(p.data, cfg);
  const auto& obj = result.trace.objective;
  REQUIRE(obj.size() == static_cast<std::size_t>(result.trace.iterations) + 1);
  REQUIRE(result.trace.projection_objective.size() ==
          static_cast<std::size_t>(result.trace.iterations));
  for (std::size_t t = 1; t < obj.size(); ++t) {
    const double half = result.trace.projection_objective[t - 1];
    CHECK(half <= obj[t - 1] + 1e-12 * obj[0]);
    CHECK(obj[t] <= half + 1e-12 * obj[0]);
  }
  CHECK(result.trace.converged);
  const std::size_t last = obj.size() - 1;
  CHECK((obj[last - 1] - obj[last]) / obj[0] < 1e-8);
  for (double v : result.trace.max_violation) CHECK(v <= 1e-8);
  CHECK(rel_diff(obj.back(), mvmf::objective(result.model, p.data, cfg.penalty)) < 1e-12);
}

TEST_CASE("stationarity at exit without penalty") {
  const auto p = planted(9, 0.3);
  FitConfig cfg;
  cfg.d = 2;
  cfg.r = 2;
  const auto result = mvmf::fit(p.data, cfg);
  const Factorization& f = result.model;
  Matrix shared = Matrix::Zero(15, 2);
  for (std::size_t m = 0; m < 3; ++m) {
    const Matrix x = mvmf::scaled_view(p.data, m);
    shared += x.transpose() * f.views[m].U;
    const Matrix v = x.transpose() * f.views[m].W;
    CHECK(max_diff(f.views[m].V, v) <= 1e-7 * v.cwiseAbs().maxCoeff());
  }
  shared /= 3.0;
  CHECK(max_diff(f.V_star, shared) <= 1e-7 * shared.cwiseAbs().maxCoeff());
}

TEST_CASE("count-mode fit keeps k nonzeros per loading column") {
  const auto p = planted(10, 0.1);
  FitConfig cfg;
  cfg.d = 2;
  cfg.r = 2;
  cfg.penalty = Penalty::count(2);
  const auto result = mvmf::fit(p.data, cfg);
  for (Eigen::Index k = 0; k < 2; ++k) {
    CHECK((result.model.V_star.col(k).array() != 0).count() == 2);
  }
  for (const auto& v : result.model.views) {
    for (Eigen::Index k = 0; k < 2; ++k) CHECK((v.V.col(k).array() != 0).count() == 2);
  }
  CHECK(mvmf::max_constraint_violation(result.model) <= 1e-8);
  CHECK(result.effective_penalty.lambda_star.size() == 2);
}

TEST_CASE("fit is deterministic") {
  const auto p = planted(11, 0.2);
  FitConfig cfg;
  cfg.d = 1;
  cfg.r = 2;
  const auto a = mvmf::fit(p.data, cfg);
  const auto b = mvmf::fit(p.data, cfg);
  CHECK(a.model.V_star == b.model.V_star);
  CHECK(a.trace.objective == b.trace.objective);
}

TEST_CASE("shared-only and specific-only fits") {
  const auto p = planted(12, 0.1);
  FitConfig cfg;
  cfg.d = 0;
  cfg.r = 2;
  const auto specific_only = mvmf::fit(p.data, cfg);
  CHECK(specific_only.model.V_star.cols() == 0);
  CHECK(mvmf::max_constraint_violation(specific_only.model) <= 1e-8);
  cfg.d = 3;
  cfg.r = 0;
  const auto shared_only = mvmf::fit(p.data, cfg);
  CHECK(shared_only.model.views[0].W.cols() == 0);
  CHECK(mvmf::max_constraint_violation(shared_only.model) <= 1e-8);
}
