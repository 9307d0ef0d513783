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

#include "pic/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pic {

namespace {
constexpr double kLogDoubleMax = 709.0;  // log(DBL_MAX) ~ 709.78

void check_dim(int d) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
}
void check_radius(double r) {
  if (!(r > 0.0)) throw std::invalid_argument("radius must be > 0");
}
}  // namespace

double norm_l2(const Vector& v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

double norm_linf(const Vector& v) {
  double m = 0.0;
  for (double c : v) m = std::max(m, std::fabs(c));
  return m;
}

double log_ball_volume(int d, double r) {
  check_dim(d);
  check_radius(r);
  const double half_d = 0.5 * d;
  return half_d * std::log(std::numbers::pi) - std::lgamma(half_d + 1.0) +
         d * std::log(r);
}

double log_cube_volume(int d, double r) {
  check_dim(d);
  check_radius(r);
  return d * std::log(2.0 * r);
}

double ball_volume(int d, double r) {
  const double lv = log_ball_volume(d, r);
  if (lv > kLogDoubleMax) throw std::range_error("ball_volume overflow");
  return std::exp(lv);
}

double cube_volume(int d, double r) {
  const double lv = log_cube_volume(d, r);
  if (lv > kLogDoubleMax) throw std::range_error("cube_volume overflow");
  return std::exp(lv);
}

double shape_volume(Shape shape, int d, double r) {
  return shape == Shape::kBall ? ball_volume(d, r) : cube_volume(d, r);
}

double log_shape_volume(Shape shape, int d, double r) {
  return shape == Shape::kBall ? log_ball_volume(d, r) : log_cube_volume(d, r);
}

bool region_contains(const Region& region, const Vector& p) {
  if (p.size() != region.center.size())
    throw std::invalid_argument("dimension mismatch");
  Vector diff(p.size());
  for (size_t i = 0; i < p.size(); ++i) diff[i] = p[i] - region.center[i];
  const double dist =
      region.shape == Shape::kBall ? norm_l2(diff) : norm_linf(diff);
  return dist <= region.radius;
}

Vector sample_uniform(const Region& region, Rng& rng) {
  const size_t d = region.center.size();
  check_dim(static_cast<int>(d));
  check_radius(region.radius);
  Vector out(d);
  if (region.shape == Shape::kCube) {
    std::uniform_real_distribution<double> u(-region.radius, region.radius);
    for (size_t i = 0; i < d; ++i) out[i] = region.center[i] + u(rng);
    return out;
  }
  // Isotropic direction from a Gaussian vector, radius scaled by U^{1/d}.
  std::normal_distribution<double> gauss(0.0, 1.0);
  double norm_sq = 0.0;
  do {
    norm_sq = 0.0;
    for (size_t i = 0; i < d; ++i) {
      out[i] = gauss(rng);
      norm_sq += out[i] * out[i];
    }
  } while (norm_sq == 0.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double scale = region.radius *
                       std::pow(unit(rng), 1.0 / static_cast<double>(d)) /
                       std::sqrt(norm_sq);
  for (size_t i = 0; i < d; ++i) out[i] = region.center[i] + out[i] * scale;
  return out;
}

NormalizedLocations normalize_locations(const std::vector<Vector>& points,
                                        const Box& box) {
  if (box.lo.size() != box.hi.size() || box.lo.empty())
    throw std::invalid_argument("malformed box");
  const size_t d = box.lo.size();
  for (size_t i = 0; i < d; ++i) {
    if (!(box.hi[i] > box.lo[i]))
      throw std::invalid_argument("degenerate box axis");
  }
  NormalizedLocations result;
  result.scale_factor = 2.0 / (box.hi[0] - box.lo[0]);
  result.points.reserve(points.size());
  for (const Vector& p : points) {
    if (p.size() != d) throw std::invalid_argument("dimension mismatch");
    Vector q(d);
    for (size_t i = 0; i < d; ++i) {
      q[i] = -1.0 + 2.0 * (p[i] - box.lo[i]) / (box.hi[i] - box.lo[i]);
    }
    result.points.push_back(std::move(q));
  }
  return result;
}

}  // namespace pic
