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

#include "pic/minkowski.hpp"

#include <cmath>
#include <stdexcept>

namespace pic {

namespace {

double domain_norm(const Vector& v, Shape shape) {
  return shape == Shape::kBall ? norm_l2(v) : norm_linf(v);
}

void check_params(const MinkowskiParams& p) {
  if (!(p.epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (p.dim < 1) throw std::invalid_argument("dimension must be >= 1");
  if (!(p.radius > 0.0)) throw std::invalid_argument("radius must be > 0");
}

}  // namespace

double minkowski_radius_formula(double epsilon, int d) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  if (!(epsilon > std::log(2.0)))
    throw std::domain_error(
        "closed-form radius needs eps > log 2; use the searched radius");
  const double root = std::pow(std::expm1(epsilon), 1.0 / (d + 2));
  return 1.0 / (root - 1.0);
}

double minkowski_error_bound(double r, double epsilon, int d, Shape shape) {
  // beta in a log-stable form: 1 / (1 + ((1+r)/r)^d / K).
  const double log_k = epsilon + std::log1p(-std::exp(-epsilon));
  const double beta =
      1.0 / (1.0 + std::exp(d * std::log((1.0 + r) / r) - log_k));
  const double om = 1.0 - beta;
  if (shape == Shape::kCube) {
    return d / (3.0 * beta * beta) *
           (beta * r * r + om * ((1.0 + r) * (1.0 + r) + 3.0 * om));
  }
  return (beta * r * r + om * (1.0 + (1.0 + r) * (1.0 + r))) / (beta * beta);
}

double minkowski_search_radius(double epsilon, int d, Shape shape) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::log(1e-4);
  double b = std::log(1e3);
  double c = b - inv_phi * (b - a);
  double e = a + inv_phi * (b - a);
  double fc = minkowski_error_bound(std::exp(c), epsilon, d, shape);
  double fe = minkowski_error_bound(std::exp(e), epsilon, d, shape);
  while (b - a > 1e-6) {
    if (fc < fe) {
      b = e;
      e = c;
      fe = fc;
      c = b - inv_phi * (b - a);
      fc = minkowski_error_bound(std::exp(c), epsilon, d, shape);
    } else {
      a = c;
      c = e;
      fc = fe;
      e = a + inv_phi * (b - a);
      fe = minkowski_error_bound(std::exp(e), epsilon, d, shape);
    }
  }
  return std::exp(0.5 * (a + b));
}

MinkowskiParams make_minkowski(double epsilon, int dim, Shape shape,
                               RadiusMode mode) {
  const double r = mode == RadiusMode::kFormula
                       ? minkowski_radius_formula(epsilon, dim)
                       : minkowski_search_radius(epsilon, dim, shape);
  MinkowskiParams p{epsilon, dim, shape, r};
  check_params(p);
  return p;
}

double minkowski_beta(const MinkowskiParams& p) {
  check_params(p);
  const double log_k = p.epsilon + std::log1p(-std::exp(-p.epsilon));
  return 1.0 /
         (1.0 + std::exp(p.dim * std::log((1.0 + p.radius) / p.radius) -
                         log_k));
}

Vector minkowski_sample(const Vector& x, const MinkowskiParams& p, Rng& rng) {
  check_params(p);
  if (static_cast<int>(x.size()) != p.dim)
    throw std::invalid_argument("dimension mismatch");
  if (domain_norm(x, p.shape) > 1.0 + 1e-12)
    throw std::invalid_argument("input outside the unit domain");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (unit(rng) < minkowski_beta(p)) {
    return sample_uniform({p.shape, x, p.radius}, rng);
  }
  return sample_uniform({p.shape, Vector(p.dim, 0.0), 1.0 + p.radius}, rng);
}

double minkowski_density(const Vector& x, const Vector& y,
                         const MinkowskiParams& p) {
  check_params(p);
  if (x.size() != y.size() || static_cast<int>(x.size()) != p.dim)
    throw std::invalid_argument("dimension mismatch");
  if (domain_norm(y, p.shape) > 1.0 + p.radius) return 0.0;
  const double k = std::expm1(p.epsilon);
  const double denom = shape_volume(p.shape, p.dim, 1.0 + p.radius) +
                       shape_volume(p.shape, p.dim, p.radius) * k;
  Vector diff(x.size());
  for (size_t i = 0; i < x.size(); ++i) diff[i] = y[i] - x[i];
  const bool in_cap = domain_norm(diff, p.shape) <= p.radius;
  return (in_cap ? std::exp(p.epsilon) : 1.0) / denom;
}

Vector minkowski_debias(const Vector& y, const MinkowskiParams& p) {
  const double beta = minkowski_beta(p);
  Vector out(y.size());
  for (size_t i = 0; i < y.size(); ++i) out[i] = y[i] / beta;
  return out;
}

double minkowski_mse_analytic(const Vector& x, const MinkowskiParams& p) {
  check_params(p);
  const double beta = minkowski_beta(p);
  const double x_sq = norm_l2(x) * norm_l2(x);
  const double d = p.dim;
  const double r = p.radius;
  double second_moment;  // E||y||^2
  if (p.shape == Shape::kBall) {
    const double frac = d / (d + 2.0);
    second_moment = beta * (x_sq + r * r * frac) +
                    (1.0 - beta) * (1.0 + r) * (1.0 + r) * frac;
  } else {
    second_moment = beta * (x_sq + d * r * r / 3.0) +
                    (1.0 - beta) * d * (1.0 + r) * (1.0 + r) / 3.0;
  }
  return second_moment / (beta * beta) - x_sq;
}

}  // namespace pic
