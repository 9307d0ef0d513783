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
#include <random>
#include <vector>

namespace pic {

using Vector = std::vector<double>;
using Rng = std::mt19937_64;

// Bounded domains come in two flavors throughout the library: the unit
// l2-ball and the unit l-infinity cube (half-side 1). The "radius" of a cube
// region is its half-side, so volume formulas stay parallel:
//   ball: pi^{d/2}/Gamma(d/2+1) * r^d        cube: (2r)^d
enum class Shape { kBall, kCube };

struct Region {
  Shape shape;
  Vector center;
  double radius;  // > 0; half-side for cubes
};

// Axis-aligned bounding box of raw input data (per-axis lo/hi).
struct Box {
  Vector lo;
  Vector hi;
};

struct NormalizedLocations {
  std::vector<Vector> points;  // mapped into [-1,1]^d
  double scale_factor;         // multiply source-unit radii by this
};

double norm_l2(const Vector& v);
double norm_linf(const Vector& v);

// Volumes. Throw std::range_error when the result overflows a double; use
// the log variants for extreme d*log(r) (only volume ratios are consumed
// downstream, so log-space subtraction is the canonical path there).
double ball_volume(int d, double r);
double cube_volume(int d, double r);
double log_ball_volume(int d, double r);
double log_cube_volume(int d, double r);
double shape_volume(Shape shape, int d, double r);
double log_shape_volume(Shape shape, int d, double r);

// Exact membership test for a region (closed: boundary included).
bool region_contains(const Region& region, const Vector& p);

// Uniform sample from a region. Ball: isotropic Gaussian direction with
// radius r*U^{1/d}; cube: independent per-coordinate uniforms.
Vector sample_uniform(const Region& region, Rng& rng);

// Affine per-axis map of raw points into [-1,1]^d. scale_factor is taken
// from the first axis (source boxes are square in every dataset this library
// targets; rectangular boxes still map correctly per axis).
// Throws std::invalid_argument on a degenerate axis (lo == hi).
NormalizedLocations normalize_locations(const std::vector<Vector>& points,
                                        const Box& box);

}  // namespace pic
