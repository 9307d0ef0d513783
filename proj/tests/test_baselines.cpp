// Copyright 2026 The PIC Library Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "pic/baselines.hpp"
#include "pic/randomizer.hpp"

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Mean debiased output over draws at a fixed input, with 4-sigma bounds from
// the empirical per-coordinate spread.
void check_unbiased(const pic::BaselineParams& p, const pic::Vector& x,
                    int n, pic::Rng& rng) {
  const size_t d = x.size();
  std::vector<double> sum(d, 0.0), sumsq(d, 0.0);
  for (int i = 0; i < n; ++i) {
    const auto rep = pic::baseline_sample(x, p, rng);
    for (size_t k = 0; k < d; ++k) {
      sum[k] += rep.debiased[k];
      sumsq[k] += rep.debiased[k] * rep.debiased[k];
    }
  }
  for (size_t k = 0; k < d; ++k) {
    const double mean = sum[k] / n;
    const double var = sumsq[k] / n - mean * mean;
    const double se = std::sqrt(var / n);
    CHECK(std::abs(mean - x[k]) <= 4.0 * se);
  }
}

}  // namespace

TEST_SUITE("baselines") {

TEST_CASE("laplace error levels") {
  pic::Rng rng(41);
  const auto low = pic::make_mechanism("laplace", 1.0, 2);
  CHECK(pic::single_report_error(low, 10000, rng).mean ==
        doctest::Approx(6.56).epsilon(0.05));
  const auto high = pic::make_mechanism("laplace", 10.0, 2);
  CHECK(pic::single_report_error(high, 10000, rng).mean ==
        doctest::Approx(0.64).epsilon(0.05));
}

TEST_CASE("laplace is additive and unbiased") {
  pic::Rng rng(43);
  pic::BaselineParams p{pic::BaselineMechanism::kLaplace, 2.0, 2, 4.0};
  const auto rep = pic::baseline_sample({0.3, -0.5}, p, rng);
  CHECK(rep.raw == rep.debiased);  // additive noise needs no correction
  CHECK(rep.mechanism_id == "laplace");
  check_unbiased(p, {0.3, -0.5}, 200000, rng);
}

TEST_CASE("planar laplace error level and radial cdf") {
  pic::Rng rng(47);
  const auto mech = pic::make_mechanism("planar_laplace", 1.0, 2);
  CHECK(pic::single_report_error(mech, 10000, rng).mean ==
        doctest::Approx(5.63).epsilon(0.05));

  const double eg = 1.0 / (2.0 * std::sqrt(2.0));
  auto cdf = [&](double rho) {
    return 1.0 - (1.0 + eg * rho) * std::exp(-eg * rho);
  };
  double prev = 0.0;
  for (double u : {0.05, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
    const double rho = pic::planar_laplace_radius(eg, u);
    CHECK(cdf(rho) == doctest::Approx(u).epsilon(1e-9));
    CHECK(rho > prev);
    prev = rho;
  }
  check_unbiased({pic::BaselineMechanism::kPlanarLaplace, 2.0, 2}, {0.3, -0.5},
                 200000, rng);
}

TEST_CASE("square wave debiasing is unbiased") {
  pic::Rng rng(53);
  check_unbiased({pic::BaselineMechanism::kSquareWave, 2.0, 2}, {0.3, -0.5},
                 200000, rng);
  check_unbiased({pic::BaselineMechanism::kSquareWave, 4.0, 2}, {-0.9, 0.1},
                 200000, rng);
}

TEST_CASE("staircase noise is symmetric and unbiased") {
  pic::Rng rng(59);
  pic::BaselineParams p{pic::BaselineMechanism::kStaircase, 2.0, 2};
  const auto rep = pic::baseline_sample({0.2, 0.2}, p, rng);
  CHECK(rep.raw == rep.debiased);
  check_unbiased(p, {0.3, -0.5}, 200000, rng);
}

TEST_CASE("infinite budget reproduces the input exactly") {
  pic::Rng rng(61);
  const pic::Vector x{0.3, -0.5};
  for (const std::string& id :
       {"minkowski", "laplace", "planar_laplace", "square_wave", "staircase"}) {
    const auto mech = pic::make_mechanism(id, kInf, 2);
    const auto rep = pic::sanitize(x, mech, rng);
    CHECK(rep.raw == x);
    CHECK(rep.debiased == x);
    CHECK(rep.mechanism_id == id);
  }
}

TEST_CASE("mechanism registry") {
  CHECK_THROWS_AS((void)pic::make_mechanism("gauss", 1.0, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)pic::make_mechanism("minkowski", 1.0, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)pic::make_mechanism("minkowski", -1.0, 2),
                  std::invalid_argument);
  // Planar Laplace is inherently two-dimensional.
  CHECK_THROWS_AS((void)pic::make_mechanism("planar_laplace", 1.0, 3),
                  std::invalid_argument);
  const auto mk = pic::make_mechanism("minkowski", 2.0, 2);
  REQUIRE(mk.minkowski.has_value());
  CHECK(mk.minkowski->radius > 0.0);
}

TEST_CASE("single-report error for the minkowski mechanism") {
  pic::Rng rng(67);
  const auto e1 = pic::make_mechanism("minkowski", 1.0, 2);
  CHECK(pic::single_report_error(e1, 10000, rng).mean ==
        doctest::Approx(4.50).epsilon(0.08));
  const auto e5 = pic::make_mechanism("minkowski", 5.0, 2);
  CHECK(pic::single_report_error(e5, 10000, rng).mean ==
        doctest::Approx(0.39).epsilon(0.08));
  const auto e10 = pic::make_mechanism("minkowski", 10.0, 2);
  CHECK(pic::single_report_error(e10, 10000, rng).mean ==
        doctest::Approx(0.074).epsilon(0.08));
  const auto inf = pic::make_mechanism("minkowski", kInf, 2);
  CHECK(pic::single_report_error(inf, 100, rng).mean == 0.0);
}

}  // TEST_SUITE
