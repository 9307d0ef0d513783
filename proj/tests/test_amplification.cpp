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
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "pic/amplification.hpp"

TEST_SUITE("amplification") {

TEST_CASE("closed-form worked value") {
  CHECK(pic::amplify_closed_form(2.0, 1e-6, 10000) ==
        doctest::Approx(0.501).epsilon(2e-3));
  CHECK(std::abs(pic::amplify_closed_form(2.0, 1e-6, 10000) - 0.501) < 1e-3);
}

TEST_CASE("amplification vanishes in the large-population limit") {
  CHECK(pic::amplify_closed_form(2.0, 1e-6, 1000000000000LL) < 1e-3);
  double prev = 10.0;
  for (int64_t n : {10000LL, 100000LL, 1000000LL, 10000000LL}) {
    const double v = pic::amplify_closed_form(2.0, 1e-6, n);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("monotonicity in epsilon on a dense grid") {
  const double delta = 1e-8;
  const double n = 1e7;
  double prev = 0.0;
  for (int i = 1; i <= 200; ++i) {
    const double eps = 0.05 * i;  // 0.05 .. 10
    const double v = pic::amplification_value(eps, delta, n);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("amplification dominates: central budget below local") {
  for (double eps : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    for (double delta : {1e-10, 1e-6, 1e-2}) {
      for (double n : {1e3, 1e4, 1e6}) {
        if (n < pic::min_feasible_population(eps, delta)) continue;
        CHECK(pic::amplification_value(eps, delta, n) < eps);
      }
    }
  }
}

TEST_CASE("feasibility boundary is enforced exactly") {
  const double eps = 2.0;
  const double delta = 1e-6;
  const double boundary = pic::min_feasible_population(eps, delta);
  CHECK(boundary ==
        doctest::Approx(16.0 * std::exp(eps) * std::log(2.0 / delta)));
  const auto below = static_cast<int64_t>(std::floor(boundary)) - 1;
  const auto above = static_cast<int64_t>(std::ceil(boundary)) + 1;
  CHECK_THROWS_AS((void)pic::amplify_closed_form(eps, delta, below),
                  pic::InfeasibleAmplification);
  CHECK_NOTHROW((void)pic::amplify_closed_form(eps, delta, above));
  try {
    (void)pic::amplify_closed_form(eps, delta, below);
  } catch (const pic::InfeasibleAmplification& e) {
    CHECK(e.min_population == doctest::Approx(boundary));
  }
}

TEST_CASE("inversion round trips") {
  const double delta = 1e-6;
  const int64_t n = 10000;
  const double target = pic::amplify_closed_form(2.0, delta, n);
  const auto inv = pic::invert_amplify(target, delta, n);
  CHECK(inv.epsilon == doctest::Approx(2.0).epsilon(1e-6));

  // Inverse consistency across a target grid.
  for (double eps_c : {0.05, 0.2, 0.5, 1.0, 2.0, 4.0}) {
    const auto r = pic::invert_amplify(eps_c, delta, n);
    CHECK(std::abs(pic::amplification_value(r.epsilon, delta,
                                            static_cast<double>(n)) -
                   eps_c) <= 1e-8);
  }
}

TEST_CASE("inversion grows with population at a fixed central target") {
  const double delta = 1e-6;
  const double lo = pic::invert_amplify(1.0, delta, 1000).epsilon;
  const double hi = pic::invert_amplify(1.0, delta, 100000).epsilon;
  CHECK(hi > lo);
  const auto big = pic::invert_amplify(1.0, delta, 1000000);
  CHECK(big.epsilon > 4.0);
  CHECK(big.epsilon < 8.0);
}

TEST_CASE("inversion flags") {
  // Crowdsourcing-scale populations sit far above the certification ceiling:
  // the solver still reports the exact root, flagged.
  const double delta = 0.01 / 713;
  const auto r = pic::invert_amplify(1.0, delta, 712);
  CHECK(r.flag == pic::InvertFlag::kBeyondCertified);
  CHECK(r.epsilon == doctest::Approx(1.6729).epsilon(1e-3));
  CHECK(r.certified_ceiling ==
        doctest::Approx(std::log(712.0 / (16.0 * std::log(2.0 / delta)))));
  CHECK(r.epsilon > r.certified_ceiling);

  // Interior solution keeps the interior flag.
  const auto in = pic::invert_amplify(0.2, 1e-6, 1000000);
  CHECK(in.flag == pic::InvertFlag::kInterior);

  // Targets below the smallest achievable value hit the floor.
  const auto fl = pic::invert_amplify(1e-12, 1e-6, 10000);
  CHECK(fl.flag == pic::InvertFlag::kAtFloor);
}

TEST_CASE("effective population policies") {
  CHECK(pic::effective_population(713, pic::PopulationPolicy::kMinusOne) ==
        712);
  CHECK(pic::effective_population(10000, pic::PopulationPolicy::kFraction,
                                  0.90) == 9000);
  CHECK(pic::effective_population(713, pic::PopulationPolicy::kFull) == 713);
  CHECK_THROWS_AS(
      (void)pic::effective_population(1, pic::PopulationPolicy::kMinusOne),
      std::invalid_argument);
  CHECK_THROWS_AS((void)pic::effective_population(
                      10, pic::PopulationPolicy::kFraction, 0.01),
                  std::invalid_argument);
}

TEST_CASE("default failure probability") {
  CHECK(pic::delta_default(100) == doctest::Approx(1e-4));
  CHECK(pic::delta_default(50000) == doctest::Approx(2e-7));
  CHECK(pic::delta_default(1) == doctest::Approx(0.01));
}

TEST_CASE("asymptotic envelope of the closed form") {
  // amplify(eps, delta, n) * sqrt(n) stays within constant factors of
  // (1 - e^-eps) sqrt(e^eps log(1/delta)) across the certified regime.
  for (double eps : {0.5, 1.0, 2.0, 4.0}) {
    for (double delta : {1e-10, 1e-6, 1e-3}) {
      for (double n : {1e5, 1e6, 1e8}) {
        if (n < pic::min_feasible_population(eps, delta)) continue;
        const double v = pic::amplification_value(eps, delta, n);
        const double envelope = (1.0 - std::exp(-eps)) *
                                std::sqrt(std::exp(eps) * std::log(1.0 / delta));
        const double ratio = v * std::sqrt(n) / envelope;
        CHECK(ratio >= 2.0);
        CHECK(ratio <= 12.0);
      }
    }
  }
}

}  // TEST_SUITE
