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

#pragma once

#include <cstdint>
#include <stdexcept>

namespace pic {

// Privacy-amplification accounting for the shuffle model.
//
// Closed-form central budget for n' anonymous users each running an
// eps-LDP randomizer:
//
//   eps_c = log(1 + tanh(eps/2) * (sqrt(64 e^eps log(4/delta) / n')
//                                  + 8 e^eps / n'))
//
// (tanh(eps/2) == (e^eps-1)/(e^eps+1)), certified under the precondition
// n' >= 16 e^eps log(2/delta).

struct InfeasibleAmplification : std::runtime_error {
  InfeasibleAmplification(double min_pop)
      : std::runtime_error("population below the amplification feasibility "
                           "boundary"),
        min_population(min_pop) {}
  double min_population;  // smallest n' satisfying the precondition
};

// Smallest population satisfying the certification precondition.
double min_feasible_population(double epsilon, double delta);

// Raw closed-form expression, defined (and strictly increasing in epsilon,
// strictly decreasing in population) for every epsilon > 0. Carries no
// feasibility guarantee by itself.
double amplification_value(double epsilon, double delta, double population);

// The certified bound: amplification_value with the precondition enforced.
// Throws InfeasibleAmplification below the boundary.
double amplify_closed_form(double epsilon, double delta, int64_t population);

enum class InvertFlag {
  kInterior,         // solution within the certified band
  kAtFloor,          // target at/below the value of the smallest epsilon
  kBeyondCertified,  // exact solution, but above the certification ceiling
};

struct InvertResult {
  double epsilon;            // local budget achieving the target
  InvertFlag flag = InvertFlag::kInterior;
  double certified_ceiling;  // log(population / (16 log(2/delta)))
};

// Numerical inversion of the closed form: returns the epsilon whose
// amplification value equals epsilon_central (|residual| <= 1e-9), by
// bisection on an expanding bracket starting at [1e-6, ceiling]. The
// expression is strictly monotone for every epsilon > 0, so the solution is
// unique; when it exceeds the certification ceiling the result is flagged
// kBeyondCertified rather than clamped (the certified regime tops out at
// local budgets far below what realistic group sizes need, and downstream
// consumers audit the flag).
InvertResult invert_amplify(double epsilon_central, double delta,
                            int64_t population);

enum class PopulationPolicy { kFull, kMinusOne, kFraction };

// Effective amplification population: kFull -> n, kMinusOne -> n-1 (matching
// tasks deanonymize one partner), kFraction -> floor(n*f) (social tasks
// deanonymize a neighborhood; f = 0.90 for tau = 0.2, 0.98 for tau = 0.1).
// Throws std::invalid_argument when the result would be < 1.
int64_t effective_population(int64_t group_size, PopulationPolicy policy,
                             double fraction = 1.0);

// Default failure probability: 0.01 / group_size.
double delta_default(int64_t group_size);

}  // namespace pic
