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

#include <optional>
#include <string>

#include "pic/baselines.hpp"
#include "pic/minkowski.hpp"

namespace pic {

// Mechanism identifiers (CLI/config strings):
//   "minkowski", "laplace", "planar_laplace", "square_wave", "staircase".
//
// epsilon == +infinity selects the zero-noise limit (identity) for every
// mechanism.
struct MechanismConfig {
  std::string id;
  double epsilon = 1.0;
  int dim = 2;
  Shape domain_shape = Shape::kCube;  // domain (and Minkowski cap) shape
  RadiusMode radius_mode = RadiusMode::kSearched;
  double sensitivity = 4.0;  // laplace
  std::optional<MinkowskiParams> minkowski;  // precomputed by make_mechanism
  std::optional<BaselineParams> baseline;
};

// Validates the id and precomputes mechanism parameters (in particular the
// Minkowski radius, so repeated sanitize calls don't re-run the search).
// Throws std::invalid_argument on unknown ids.
MechanismConfig make_mechanism(const std::string& id, double epsilon, int dim,
                               Shape domain_shape = Shape::kCube,
                               RadiusMode mode = RadiusMode::kSearched);

SanitizedReport sanitize(const Vector& x, const MechanismConfig& mech,
                         Rng& rng);

struct ErrorStats {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation of per-trial errors
};

// Mean l2 distance between the debiased report and the true value over
// `trials` inputs drawn uniformly from the unit domain; `squared` switches to
// squared distance for rate checks.
ErrorStats single_report_error(const MechanismConfig& mech, int trials,
                               Rng& rng, bool squared = false);

}  // namespace pic
