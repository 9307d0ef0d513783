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

#include <string>

#include "pic/geometry.hpp"

namespace pic {

// Baseline LDP randomizers on [-1,1]^d.
//
//  - Laplace: independent per-coordinate Laplace noise with scale
//    sensitivity/eps; the replacement sensitivity of [-1,1]^2 is 4 (l1
//    diameter). Additive and unbiased.
//  - PlanarLaplace: 2-d polar Laplace with geo-indistinguishability
//    parameter eps/(2*sqrt(2)); uniform angle, radial CDF
//    C(rho) = 1 - (1 + e_g rho) exp(-e_g rho) inverted by bisection.
//    Additive and unbiased.
//  - SquareWave: per-dimension mechanism with budget eps/d on [0,1]
//    (coordinates are affinely mapped from [-1,1] and the estimate mapped
//    back); reports near the true value with density p over a window of
//    half-width b and q elsewhere; debiased by the published affine
//    estimator.
//  - Staircase: per-dimension additive staircase noise with budget eps/d and
//    sensitivity 2 (width of [-1,1]); geometric mixture with the MSE-optimal
//    gamma = 1/(1 + e^{eps_d/2}). Symmetric, unbiased.
enum class BaselineMechanism { kLaplace, kPlanarLaplace, kSquareWave, kStaircase };

struct BaselineParams {
  BaselineMechanism mechanism;
  double epsilon;            // > 0
  int dim;
  double sensitivity = 4.0;  // Laplace only
};

struct SanitizedReport {
  Vector raw;       // mechanism output y
  Vector debiased;  // unbiased estimate x~
  std::string mechanism_id;
};

SanitizedReport baseline_sample(const Vector& x, const BaselineParams& p,
                                Rng& rng);

// Exposed for tests: inverse radial CDF of the planar Laplace distribution.
double planar_laplace_radius(double eps_geo, double u);

}  // namespace pic
