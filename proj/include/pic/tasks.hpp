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
#include <utility>
#include <vector>

#include "pic/geometry.hpp"

namespace pic {

// Server-side permutation-equivariant tasks. Identifiers (CLI/config):
//   "min_weight_matching", "max_matching", "radius_nn", "shapley_incentive",
//   "identity".

struct Matching {
  std::vector<std::pair<int, int>> pairs;  // (index in A, index in B)
  double total_cost = 0.0;                 // sum of matched-edge distances
};

// Minimum-weight full matching under Euclidean cost via the
// Jonker-Volgenant shortest-augmenting-path method (rectangular: every
// element of the smaller side is matched). Deterministic; ties broken by
// lowest index.
Matching min_weight_full_matching(const std::vector<Vector>& side_a,
                                  const std::vector<Vector>& side_b);

// Maximum-cardinality matching on the graph with edges {(i,j):
// ||a_i - b_j|| <= tau}, via Hopcroft-Karp. total_cost is the sum of matched
// distances (informational).
Matching max_matching_within_radius(const std::vector<Vector>& side_a,
                                    const std::vector<Vector>& side_b,
                                    double tau);

// For each point, the indices within l2 distance tau (closed ball, self
// excluded), ascending. The uniform-grid index returns identical sets to the
// exact pairwise scan; it exists purely for speed.
std::vector<std::vector<int>> radius_nn(const std::vector<Vector>& points,
                                        double tau, bool use_grid = false);

// Cosine utility of a coalition: <grad_val, sum_S g_i> /
// (||grad_val|| * ||sum_S g_i||); 0 for the empty set or a zero aggregate.
// Throws std::invalid_argument on a zero grad_val.
double cosine_utility(const std::vector<int>& subset,
                      const std::vector<Vector>& grads,
                      const Vector& grad_val);

struct ShapleyVector {
  std::vector<double> values;
  std::vector<double> std_errors;  // Monte Carlo only; empty for exact
};

// Exact Shapley values by subset enumeration with the standard coalition
// weights |S|! (n-|S|-1)! / n!. Throws std::invalid_argument above n = 20.
ShapleyVector shapley_exact(const std::vector<Vector>& grads,
                            const Vector& grad_val);

// Permutation-sampling estimator over `samples` uniform orderings; unbiased
// for the exact value.
ShapleyVector shapley_monte_carlo(const std::vector<Vector>& grads,
                                  const Vector& grad_val, int samples,
                                  Rng& rng);

// Coordinate-wise mean. Throws std::invalid_argument on an empty list.
Vector gradient_aggregate(const std::vector<Vector>& grads);

}  // namespace pic
