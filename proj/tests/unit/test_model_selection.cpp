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

#include <random>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "mvmf/errors.hpp"
#include "mvmf/model_selection.hpp"
#include "mvmf/synthetic.hpp"
#include "planted_specs.hpp"
#include "test_support.hpp"

using mvmf::FitConfig;
using mvmf::Matrix;

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

double best_total(const mvmf::RankCandidate& c) {
  double best = 0.0;
  for (const auto& f : c.per_view) best = std::max(best, f.total());
  return best;
}

}  // namespace

TEST_CASE("variance_explained") {
  std::mt19937_64 rng(1);
  const auto ds = mvmf::testing::random_dataset({8, 9}, 4, rng);

  SUBCASE("zero loadings explain nothing") {
    const auto f = mvmf::zero_factorization(ds, 1, 1);
    const auto e = mvmf::variance_explained(f, ds, 1);
    CHECK(e.shared == 0.0);
    CHECK(e.specific == 0.0);
  }
  SUBCASE("shared loadings equal to the data explain everything") {
    // One view of rank one: X = u v^T exactly.
    Matrix x(4, 3);
    x << 1, 2, -1, -1, -2, 1, 2, 4, -2, -2, -4, 2;
    mvmf::ViewMatrix v{"v", {"a", "b", "c", "d"}, x, {}};
    const auto one = mvmf::center_columns(mvmf::MultiViewDataset({v}, {"x", "y", "z"}));
    FitConfig cfg;
    cfg.d = 1;
    cfg.r = 0;
    const auto res = mvmf::fit(one, cfg);
    const auto e = mvmf::variance_explained(res.model, one, 0);
    CHECK(e.total() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(e.specific == 0.0);
  }
  SUBCASE("single view fraction equals the eigenvalue ratio") {
    const auto one = mvmf::testing::random_dataset({12}, 6, rng);
    const Matrix x = mvmf::scaled_view(one, 0);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(x.transpose() * x);
    const auto& ev = eig.eigenvalues();  // ascending
    const double trace = ev.sum();
    FitConfig cfg;
    cfg.d = 1;
    cfg.r = 1;
    cfg.rel_tol = 1e-13;
    cfg.max_iters = 5000;
    const auto res = mvmf::fit(one, cfg);
    const auto e = mvmf::variance_explained(res.model, one, 0);
    CHECK(e.total() == doctest::Approx((ev(5) + ev(4)) / trace).epsilon(1e-8));
  }
  SUBCASE("specific-only single view is PCA") {
    const auto one = mvmf::testing::random_dataset({10}, 5, rng);
    const Matrix x = mvmf::scaled_view(one, 0);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(x.transpose() * x);
    const auto& ev = eig.eigenvalues();
    FitConfig cfg;
    cfg.d = 0;
    cfg.r = 2;
    const auto res = mvmf::fit(one, cfg);
    const auto e = mvmf::variance_explained(res.model, one, 0);
    CHECK(e.shared == 0.0);
    CHECK(e.specific == doctest::Approx((ev(4) + ev(3)) / ev.sum()).epsilon(1e-10));
  }
  SUBCASE("noiseless planted fit explains everything in every view") {
    mvmf::PlantSpec spec;
    spec.n = {40, 40, 40};
    spec.p = 15;
    spec.d = 2;
    spec.r = 2;
    spec.seed = 2;
    const auto planted = mvmf::generate(spec);
    FitConfig cfg;
    cfg.d = 2;
    cfg.r = 2;
    cfg.rel_tol = 1e-15;
    cfg.max_iters = 20000;
    const auto res = mvmf::fit(planted.data, cfg);
    for (std::size_t m = 0; m < 3; ++m) {
      CHECK(std::abs(mvmf::variance_explained(res.model, planted.data, m).total() - 1.0) <=
            1e-8);
    }
  }
  SUBCASE("view index checked") {
    const auto f = mvmf::zero_factorization(ds, 1, 1);
    CHECK(code_of([&] { mvmf::variance_explained(f, ds, 2); }) ==
          mvmf::Errc::kViewIndexOutOfRange);
  }
}

TEST_CASE("select_d recovers the planted shared rank") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto planted = mvmf::generate(mvmf::testing::rank_selection_spec(seed));
    CHECK(mvmf::select_d(planted.data, 2, 0.9, FitConfig{}) == 3);
  }
}

TEST_CASE("scan stops at the first qualifying d") {
  const auto planted = mvmf::generate(mvmf::testing::rank_selection_spec(4));
  const auto scan = mvmf::scan_ranks(planted.data, 2, 0.9, FitConfig{});
  REQUIRE(scan.selected.has_value());
  REQUIRE(scan.candidates.size() == static_cast<std::size_t>(*scan.selected));
  for (std::size_t i = 0; i + 1 < scan.candidates.size(); ++i) {
    CHECK_FALSE(scan.candidates[i].qualifies);
    CHECK(scan.candidates[i].d == static_cast<Eigen::Index>(i) + 1);
  }
  CHECK(scan.candidates.back().qualifies);

  SUBCASE("a threshold between the d = 1 and d = 2 fractions selects 2") {
    const double f1 = best_total(scan.candidates[0]);
    const double f2 = best_total(scan.candidates[1]);
    REQUIRE(f2 > f1);
    CHECK(mvmf::select_d(planted.data, 2, 0.5 * (f1 + f2), FitConfig{}) == 2);
    CHECK(mvmf::select_d(planted.data, 2, f1, FitConfig{}) == 1);
  }
  SUBCASE("thread count does not change the scan") {
    for (unsigned threads : {2u, 3u, 5u}) {
      const auto other = mvmf::scan_ranks(planted.data, 2, 0.9, FitConfig{}, threads);
      REQUIRE(other.candidates.size() == scan.candidates.size());
      CHECK(other.selected == scan.selected);
      for (std::size_t i = 0; i < scan.candidates.size(); ++i) {
        for (std::size_t m = 0; m < 3; ++m) {
          CHECK(other.candidates[i].per_view[m].shared ==
                scan.candidates[i].per_view[m].shared);
          CHECK(other.candidates[i].per_view[m].specific ==
                scan.candidates[i].per_view[m].specific);
        }
      }
    }
  }
}

TEST_CASE("select_d reports an unreachable threshold") {
  mvmf::PlantSpec spec;
  spec.n = {10, 10, 10};
  spec.p = 30;
  spec.d = 2;
  spec.r = 2;
  spec.noise = 0.5;
  spec.seed = 3;
  const auto planted = mvmf::generate(spec);
  CHECK(code_of([&] { mvmf::select_d(planted.data, 2, 1.0, FitConfig{}); }) ==
        mvmf::Errc::kNotReached);
  const auto scan = mvmf::scan_ranks(planted.data, 2, 1.0, FitConfig{});
  CHECK_FALSE(scan.selected.has_value());
  CHECK(scan.candidates.size() == 8);  // d_max = min(n, p) - r
}

TEST_CASE("select_d argument checks") {
  std::mt19937_64 rng(5);
  const auto ds = mvmf::testing::random_dataset({8, 8}, 4, rng);
  CHECK(code_of([&] { mvmf::select_d(ds, 1, 0.0, FitConfig{}); }) ==
        mvmf::Errc::kInvalidArgument);
  CHECK(code_of([&] { mvmf::select_d(ds, 1, 1.5, FitConfig{}); }) ==
        mvmf::Errc::kInvalidArgument);
  CHECK(code_of([&] { mvmf::select_d(ds, -1, 0.9, FitConfig{}); }) ==
        mvmf::Errc::kInvalidArgument);
}
