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

#include "pic/geometry.hpp"

namespace pic {

// Minkowski Response.
//
// The input domain is the unit ball (l2) or unit cube (linf, half-side 1).
// Given a cap radius r, the output domain is the Minkowski expansion
// Y_r = domain + B_r (radius 1+r, same shape). On input x the mechanism
// returns
//     uniform(B_r(x))   with probability beta,
//     uniform(Y_r)      otherwise,
// where, with K = e^eps - 1,
//     beta = V(B_r) K / (V(Y_r) + V(B_r) K).
// For matched shapes the volume ratio V(Y_r)/V(B_r) = ((1+r)/r)^d, so beta
// is shape-independent. The density is
//     e^eps / (V(Y_r) + V(B_r) K)   inside B_r(x),
//     1     / (V(Y_r) + V(B_r) K)   on Y_r \ B_r(x),
//     0                             outside Y_r,
// whose max/min ratio over pairs of inputs is exactly e^eps (eps-LDP).
//
// Debiasing divides by beta: E[y] = beta * x, so x~ = y / beta is unbiased.
enum class RadiusMode { kFormula, kSearched };

struct MinkowskiParams {
  double epsilon;  // local budget, > 0
  int dim;
  Shape shape;    // domain shape == cap shape (matched expansions only)
  double radius;  // cap radius r > 0
};

// Closed-form radius r = ((e^eps - 1)^{1/(d+2)} - 1)^{-1}. Defined only for
// eps > log 2; back-substitution gives (1 + 1/r)^{d+2} = e^eps - 1 exactly.
// Throws std::domain_error below the eps floor.
double minkowski_radius_formula(double epsilon, int d);

// Closed-form worst-case error bound that the numerical radius search
// minimizes (worst case over the input domain; see minkowski_search_radius).
//   cube: d/(3 beta^2) * (beta r^2 + (1-beta)((1+r)^2 + 3(1-beta)))
//   ball: 1/beta^2 * (beta r^2 + (1-beta)(1 + (1+r)^2))
double minkowski_error_bound(double r, double epsilon, int d, Shape shape);

// Golden-section search on log r over [1e-4, 1e3] (relative tolerance 1e-6)
// minimizing minkowski_error_bound. Valid for every eps > 0, unlike the
// closed-form radius.
double minkowski_search_radius(double epsilon, int d, Shape shape);

MinkowskiParams make_minkowski(double epsilon, int dim, Shape shape,
                               RadiusMode mode);

double minkowski_beta(const MinkowskiParams& p);

// Throws std::invalid_argument when x lies outside the unit domain.
Vector minkowski_sample(const Vector& x, const MinkowskiParams& p, Rng& rng);

double minkowski_density(const Vector& x, const Vector& y,
                         const MinkowskiParams& p);

Vector minkowski_debias(const Vector& y, const MinkowskiParams& p);

// Exact mean squared error of the debiased output at input x:
//   E||y||^2 / beta^2 - ||x||^2, with
//   E||y||^2 = beta(||x||^2 + r^2 d/(d+2)) + (1-beta)(1+r)^2 d/(d+2)   (ball)
//   E||y||^2 = beta(||x||^2 + d r^2/3)     + (1-beta) d (1+r)^2/3      (cube)
double minkowski_mse_analytic(const Vector& x, const MinkowskiParams& p);

}  // namespace pic
