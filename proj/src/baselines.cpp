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

#include "pic/baselines.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pic {

namespace {

double laplace_noise(double scale, Rng& rng) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  const double v = u(rng);
  return -scale * (v < 0 ? -1.0 : 1.0) * std::log1p(-2.0 * std::fabs(v));
}

SanitizedReport sample_laplace(const Vector& x, const BaselineParams& p,
                               Rng& rng) {
  const double scale = p.sensitivity / p.epsilon;
  Vector y(x.size());
  for (size_t i = 0; i < x.size(); ++i) y[i] = x[i] + laplace_noise(scale, rng);
  return {y, y, "laplace"};
}

SanitizedReport sample_planar_laplace(const Vector& x, const BaselineParams& p,
                                      Rng& rng) {
  if (p.dim != 2 || x.size() != 2)
    throw std::invalid_argument("planar_laplace supports dim == 2 only");
  const double eps_geo = p.epsilon / (2.0 * std::sqrt(2.0));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double theta = 2.0 * std::numbers::pi * unit(rng);
  const double rho = planar_laplace_radius(eps_geo, unit(rng));
  Vector y{x[0] + rho * std::cos(theta), x[1] + rho * std::sin(theta)};
  return {y, y, "planar_laplace"};
}

// Square wave on [0,1] with budget eps_d. Returns the raw report in
// [-b, 1+b] and the unbiased estimate of t.
struct SquareWave {
  double b, q_mass_half, denom;  // debias: (y - q(1+2b)/2) / (2b(p-q))
  double window_mass;            // 2 b p

  explicit SquareWave(double eps_d) {
    const double e = std::exp(eps_d);
    b = (eps_d * e - e + 1.0) / (2.0 * e * (e - 1.0 - eps_d));
    const double p = e / (2.0 * b * e + 1.0);
    const double q = 1.0 / (2.0 * b * e + 1.0);
    window_mass = 2.0 * b * p;
    q_mass_half = q * (1.0 + 2.0 * b) / 2.0;
    denom = 2.0 * b * (p - q);
  }

  double sample(double t, Rng& rng) const {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (unit(rng) < window_mass) {
      std::uniform_real_distribution<double> w(t - b, t + b);
      return w(rng);
    }
    // Complement of the window within [-b, 1+b] has total length 1: the
    // segments [-b, t-b) and (t+b, 1+b].
    const double w = unit(rng);
    return w < t ? w - b : w + b;
  }

  double debias(double y) const { return (y - q_mass_half) / denom; }
};

SanitizedReport sample_square_wave(const Vector& x, const BaselineParams& p,
                                   Rng& rng) {
  const SquareWave sw(p.epsilon / p.dim);
  Vector raw(x.size()), debiased(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    const double t = (x[i] + 1.0) / 2.0;
    raw[i] = sw.sample(t, rng);
    debiased[i] = 2.0 * sw.debias(raw[i]) - 1.0;
  }
  return {raw, debiased, "square_wave"};
}

double staircase_noise(double eps_d, double delta_sens, Rng& rng) {
  const double gamma = 1.0 / (1.0 + std::exp(eps_d / 2.0));
  const double e_neg = std::exp(-eps_d);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
  std::geometric_distribution<long> geom(1.0 - e_neg);
  const double g = static_cast<double>(geom(rng));
  const double b_prob = (1.0 - gamma) * e_neg / (gamma + (1.0 - gamma) * e_neg);
  const double u = unit(rng);
  double mag;
  if (unit(rng) < b_prob) {
    mag = g + gamma + (1.0 - gamma) * u;
  } else {
    mag = g + gamma * u;
  }
  return sign * delta_sens * mag;
}

SanitizedReport sample_staircase(const Vector& x, const BaselineParams& p,
                                 Rng& rng) {
  const double eps_d = p.epsilon / p.dim;
  Vector y(x.size());
  for (size_t i = 0; i < x.size(); ++i)
    y[i] = x[i] + staircase_noise(eps_d, 2.0, rng);
  return {y, y, "staircase"};
}

}  // namespace

double planar_laplace_radius(double eps_geo, double u) {
  if (!(eps_geo > 0.0)) throw std::invalid_argument("eps_geo must be > 0");
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) throw std::invalid_argument("u must be < 1");
  auto cdf = [eps_geo](double rho) {
    return 1.0 - (1.0 + eps_geo * rho) * std::exp(-eps_geo * rho);
  };
  double lo = 0.0, hi = 1.0 / eps_geo;
  while (cdf(hi) < u) hi *= 2.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < u ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

SanitizedReport baseline_sample(const Vector& x, const BaselineParams& p,
                                Rng& rng) {
  if (!(p.epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (static_cast<int>(x.size()) != p.dim)
    throw std::invalid_argument("dimension mismatch");
  switch (p.mechanism) {
    case BaselineMechanism::kLaplace:
      return sample_laplace(x, p, rng);
    case BaselineMechanism::kPlanarLaplace:
      return sample_planar_laplace(x, p, rng);
    case BaselineMechanism::kSquareWave:
      return sample_square_wave(x, p, rng);
    case BaselineMechanism::kStaircase:
      return sample_staircase(x, p, rng);
  }
  throw std::invalid_argument("unknown mechanism");
}

}  // namespace pic
