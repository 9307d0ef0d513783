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

#include "pic/amplification.hpp"

#include <cmath>

namespace pic {

namespace {
constexpr double kEpsFloor = 1e-6;

void check_common(double epsilon, double delta, double population) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("delta must be in (0,1)");
  if (!(population >= 1.0))
    throw std::invalid_argument("population must be >= 1");
}
}  // namespace

double min_feasible_population(double epsilon, double delta) {
  return 16.0 * std::exp(epsilon) * std::log(2.0 / delta);
}

double amplification_value(double epsilon, double delta, double population) {
  check_common(epsilon, delta, population);
  // Computed via exp of logs so very large epsilon degrades to +inf
  // monotonically instead of producing NaNs.
  const double log4d = std::log(4.0 / delta);
  const double sqrt_term =
      std::exp(0.5 * (epsilon + std::log(64.0 * log4d / population)));
  const double linear_term = std::exp(epsilon + std::log(8.0 / population));
  return std::log1p(std::tanh(epsilon / 2.0) * (sqrt_term + linear_term));
}

double amplify_closed_form(double epsilon, double delta, int64_t population) {
  check_common(epsilon, delta, static_cast<double>(population));
  const double min_pop = min_feasible_population(epsilon, delta);
  if (static_cast<double>(population) < min_pop)
    throw InfeasibleAmplification(min_pop);
  return amplification_value(epsilon, delta, static_cast<double>(population));
}

InvertResult invert_amplify(double epsilon_central, double delta,
                            int64_t population) {
  if (!(epsilon_central > 0.0))
    throw std::invalid_argument("epsilon_central must be > 0");
  const double n = static_cast<double>(population);
  check_common(kEpsFloor, delta, n);

  InvertResult result;
  result.certified_ceiling = std::log(n / (16.0 * std::log(2.0 / delta)));

  if (amplification_value(kEpsFloor, delta, n) >= epsilon_central) {
    result.epsilon = kEpsFloor;
    result.flag = InvertFlag::kAtFloor;
    return result;
  }

  double lo = kEpsFloor;
  double hi = std::max(result.certified_ceiling, 1.0);
  while (amplification_value(hi, delta, n) < epsilon_central) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) throw std::runtime_error("inversion bracket blew up");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    (amplification_value(mid, delta, n) < epsilon_central ? lo : hi) = mid;
  }
  result.epsilon = 0.5 * (lo + hi);
  result.flag = result.epsilon > result.certified_ceiling
                    ? InvertFlag::kBeyondCertified
                    : InvertFlag::kInterior;
  return result;
}

int64_t effective_population(int64_t group_size, PopulationPolicy policy,
                             double fraction) {
  if (group_size < 1) throw std::invalid_argument("group_size must be >= 1");
  int64_t n = group_size;
  switch (policy) {
    case PopulationPolicy::kFull:
      break;
    case PopulationPolicy::kMinusOne:
      n = group_size - 1;
      break;
    case PopulationPolicy::kFraction:
      if (!(fraction > 0.0 && fraction <= 1.0))
        throw std::invalid_argument("fraction must be in (0,1]");
      n = static_cast<int64_t>(std::floor(group_size * fraction));
      break;
  }
  if (n < 1) throw std::invalid_argument("degenerate effective population");
  return n;
}

double delta_default(int64_t group_size) {
  if (group_size < 1) throw std::invalid_argument("group_size must be >= 1");
  return 0.01 / static_cast<double>(group_size);
}

}  // namespace pic
