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

#include "pic/randomizer.hpp"

#include <cmath>
#include <stdexcept>

namespace pic {

MechanismConfig make_mechanism(const std::string& id, double epsilon, int dim,
                               Shape domain_shape, RadiusMode mode) {
  MechanismConfig cfg;
  cfg.id = id;
  cfg.epsilon = epsilon;
  cfg.dim = dim;
  cfg.domain_shape = domain_shape;
  cfg.radius_mode = mode;
  const bool zero_noise = std::isinf(epsilon);
  if (id == "minkowski") {
    if (!zero_noise)
      cfg.minkowski = make_minkowski(epsilon, dim, domain_shape, mode);
    return cfg;
  }
  BaselineMechanism mech;
  if (id == "laplace") {
    mech = BaselineMechanism::kLaplace;
  } else if (id == "planar_laplace") {
    if (dim != 2) {
      throw std::invalid_argument("planar_laplace requires dim == 2");
    }
    mech = BaselineMechanism::kPlanarLaplace;
  } else if (id == "square_wave") {
    mech = BaselineMechanism::kSquareWave;
  } else if (id == "staircase") {
    mech = BaselineMechanism::kStaircase;
  } else {
    throw std::invalid_argument("unknown mechanism id: " + id);
  }
  if (!zero_noise) cfg.baseline = BaselineParams{mech, epsilon, dim, cfg.sensitivity};
  return cfg;
}

SanitizedReport sanitize(const Vector& x, const MechanismConfig& mech,
                         Rng& rng) {
  if (std::isinf(mech.epsilon)) return {x, x, mech.id};
  if (mech.minkowski) {
    const Vector y = minkowski_sample(x, *mech.minkowski, rng);
    return {y, minkowski_debias(y, *mech.minkowski), mech.id};
  }
  if (mech.baseline) return baseline_sample(x, *mech.baseline, rng);
  throw std::logic_error("mechanism config not initialized");
}

ErrorStats single_report_error(const MechanismConfig& mech, int trials,
                               Rng& rng, bool squared) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  const Region domain{mech.domain_shape, Vector(mech.dim, 0.0), 1.0};
  double sum = 0.0, sum_sq = 0.0;
  for (int t = 0; t < trials; ++t) {
    const Vector x = sample_uniform(domain, rng);
    const SanitizedReport rep = sanitize(x, mech, rng);
    Vector diff(x.size());
    for (size_t i = 0; i < x.size(); ++i) diff[i] = rep.debiased[i] - x[i];
    double err = norm_l2(diff);
    if (squared) err *= err;
    sum += err;
    sum_sq += err * err;
  }
  ErrorStats stats;
  stats.mean = sum / trials;
  if (trials > 1) {
    const double var =
        (sum_sq - sum * sum / trials) / static_cast<double>(trials - 1);
    stats.stddev = std::sqrt(std::max(0.0, var));
  }
  return stats;
}

}  // namespace pic
