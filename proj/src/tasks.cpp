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

#include "pic/tasks.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <stdexcept>

namespace pic {

namespace {

double dist_l2(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

void check_same_dim(const std::vector<Vector>& a, const std::vector<Vector>& b) {
  std::size_t dim = 0;
  bool have = false;
  for (const auto* side : {&a, &b}) {
    for (const auto& p : *side) {
      if (!have) {
        dim = p.size();
        have = true;
      } else if (p.size() != dim) {
        throw std::invalid_argument("tasks: mixed point dimensions");
      }
    }
  }
}

// Jonker-Volgenant / Hungarian with row and column potentials, 1-based
// internally. Rows must be the smaller side. O(rows * cols^2), flat
// row-major cost.
std::vector<int> assign_min_cost(const std::vector<double>& cost, int nr,
                                 int nc) {
  const double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(nr + 1, 0.0), v(nc + 1, 0.0);
  std::vector<int> p(nc + 1, 0), way(nc + 1, 0);
  std::vector<double> minv(nc + 1);
  std::vector<char> used(nc + 1);
  for (int i = 1; i <= nr; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      const double* row = cost.data() + static_cast<std::size_t>(i0 - 1) * nc;
      double delta = kInf;
      int j1 = -1;
      for (int j = 1; j <= nc; ++j) {
        if (used[j]) continue;
        const double cur = row[j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= nc; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(nr, -1);
  for (int j = 1; j <= nc; ++j) {
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

}  // namespace

Matching min_weight_full_matching(const std::vector<Vector>& side_a,
                                  const std::vector<Vector>& side_b) {
  check_same_dim(side_a, side_b);
  Matching m;
  if (side_a.empty() || side_b.empty()) return m;
  const bool a_small = side_a.size() <= side_b.size();
  const auto& rows = a_small ? side_a : side_b;
  const auto& cols = a_small ? side_b : side_a;
  const int nr = static_cast<int>(rows.size());
  const int nc = static_cast<int>(cols.size());
  std::vector<double> cost(static_cast<std::size_t>(nr) * nc);
  for (int i = 0; i < nr; ++i) {
    double* out = cost.data() + static_cast<std::size_t>(i) * nc;
    for (int j = 0; j < nc; ++j) out[j] = dist_l2(rows[i], cols[j]);
  }
  const std::vector<int> row_to_col = assign_min_cost(cost, nr, nc);
  m.pairs.reserve(nr);
  for (int i = 0; i < nr; ++i) {
    const int j = row_to_col[i];
    m.total_cost += cost[static_cast<std::size_t>(i) * nc + j];
    if (a_small) {
      m.pairs.emplace_back(i, j);
    } else {
      m.pairs.emplace_back(j, i);
    }
  }
  std::sort(m.pairs.begin(), m.pairs.end());
  return m;
}

Matching max_matching_within_radius(const std::vector<Vector>& side_a,
                                    const std::vector<Vector>& side_b,
                                    double tau) {
  check_same_dim(side_a, side_b);
  if (tau < 0.0) throw std::invalid_argument("max_matching: negative tau");
  const int na = static_cast<int>(side_a.size());
  const int nb = static_cast<int>(side_b.size());
  std::vector<std::vector<int>> adj(na);
  for (int i = 0; i < na; ++i) {
    for (int j = 0; j < nb; ++j) {
      if (dist_l2(side_a[i], side_b[j]) <= tau) adj[i].push_back(j);
    }
  }
  // Hopcroft-Karp. match_a[i] = partner of a_i or -1; layered BFS from free
  // left vertices, then DFS along alternating level paths.
  const int kInf = std::numeric_limits<int>::max();
  std::vector<int> match_a(na, -1), match_b(nb, -1), level(na);
  auto bfs = [&]() {
    std::queue<int> q;
    bool reachable_free = false;
    for (int i = 0; i < na; ++i) {
      if (match_a[i] == -1) {
        level[i] = 0;
        q.push(i);
      } else {
        level[i] = kInf;
      }
    }
    while (!q.empty()) {
      const int i = q.front();
      q.pop();
      for (int j : adj[i]) {
        const int i2 = match_b[j];
        if (i2 == -1) {
          reachable_free = true;
        } else if (level[i2] == kInf) {
          level[i2] = level[i] + 1;
          q.push(i2);
        }
      }
    }
    return reachable_free;
  };
  std::function<bool(int)> dfs = [&](int i) {
    for (int j : adj[i]) {
      const int i2 = match_b[j];
      if (i2 == -1 || (level[i2] == level[i] + 1 && dfs(i2))) {
        match_a[i] = j;
        match_b[j] = i;
        return true;
      }
    }
    level[i] = kInf;
    return false;
  };
  while (bfs()) {
    for (int i = 0; i < na; ++i) {
      if (match_a[i] == -1) dfs(i);
    }
  }
  Matching m;
  for (int i = 0; i < na; ++i) {
    if (match_a[i] != -1) {
      m.pairs.emplace_back(i, match_a[i]);
      m.total_cost += dist_l2(side_a[i], side_b[match_a[i]]);
    }
  }
  return m;
}

namespace {

std::vector<std::vector<int>> radius_nn_pairwise(
    const std::vector<Vector>& points, double tau) {
  const int n = static_cast<int>(points.size());
  std::vector<std::vector<int>> out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (dist_l2(points[i], points[j]) <= tau) {
        out[i].push_back(j);
        out[j].push_back(i);
      }
    }
  }
  for (auto& v : out) std::sort(v.begin(), v.end());
  return out;
}

std::vector<std::vector<int>> radius_nn_grid(const std::vector<Vector>& points,
                                             double tau) {
  const int n = static_cast<int>(points.size());
  const int d = static_cast<int>(points[0].size());
  // Cell side tau: neighbors of a point live in the 3^d adjacent cells.
  std::map<std::vector<std::int64_t>, std::vector<int>> cells;
  std::vector<std::int64_t> key(d);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < d; ++k) {
      key[k] = static_cast<std::int64_t>(std::floor(points[i][k] / tau));
    }
    cells[key].push_back(i);
  }
  std::vector<std::vector<int>> out(n);
  std::vector<std::int64_t> probe(d);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < d; ++k) {
      key[k] = static_cast<std::int64_t>(std::floor(points[i][k] / tau));
    }
    // Enumerate offsets in {-1,0,1}^d.
    std::vector<int> off(d, -1);
    while (true) {
      for (int k = 0; k < d; ++k) probe[k] = key[k] + off[k];
      auto it = cells.find(probe);
      if (it != cells.end()) {
        for (int j : it->second) {
          if (j != i && dist_l2(points[i], points[j]) <= tau) {
            out[i].push_back(j);
          }
        }
      }
      int k = 0;
      while (k < d && off[k] == 1) off[k++] = -1;
      if (k == d) break;
      ++off[k];
    }
    std::sort(out[i].begin(), out[i].end());
  }
  return out;
}

}  // namespace

std::vector<std::vector<int>> radius_nn(const std::vector<Vector>& points,
                                        double tau, bool use_grid) {
  if (tau < 0.0) throw std::invalid_argument("radius_nn: negative tau");
  if (points.empty()) return {};
  check_same_dim(points, points);
  if (use_grid && tau > 0.0) return radius_nn_grid(points, tau);
  return radius_nn_pairwise(points, tau);
}

namespace {

double cosine_of_sum(const Vector& sum, const Vector& grad_val,
                     double grad_val_norm) {
  double dot = 0.0, nsq = 0.0;
  for (std::size_t k = 0; k < sum.size(); ++k) {
    dot += sum[k] * grad_val[k];
    nsq += sum[k] * sum[k];
  }
  if (nsq == 0.0) return 0.0;
  return dot / (std::sqrt(nsq) * grad_val_norm);
}

double checked_grad_val_norm(const Vector& grad_val) {
  const double nv = norm_l2(grad_val);
  if (nv == 0.0) {
    throw std::invalid_argument("cosine utility: zero validation gradient");
  }
  return nv;
}

}  // namespace

double cosine_utility(const std::vector<int>& subset,
                      const std::vector<Vector>& grads,
                      const Vector& grad_val) {
  const double nv = checked_grad_val_norm(grad_val);
  if (subset.empty()) return 0.0;
  Vector sum(grad_val.size(), 0.0);
  for (int i : subset) {
    const Vector& g = grads.at(static_cast<std::size_t>(i));
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += g[k];
  }
  return cosine_of_sum(sum, grad_val, nv);
}

ShapleyVector shapley_exact(const std::vector<Vector>& grads,
                            const Vector& grad_val) {
  const int n = static_cast<int>(grads.size());
  if (n == 0) throw std::invalid_argument("shapley_exact: no participants");
  if (n > 20) throw std::invalid_argument("shapley_exact: n > 20");
  const double nv = checked_grad_val_norm(grad_val);
  const std::size_t d = grad_val.size();
  const std::uint32_t full = 1u << n;

  // U over every coalition, filled by depth-first enumeration with a running
  // aggregate so each subset costs O(d).
  std::vector<double> util(full, 0.0);
  Vector sum(d, 0.0);
  std::function<void(std::uint32_t, int)> visit = [&](std::uint32_t mask,
                                                      int next) {
    for (int i = next; i < n; ++i) {
      for (std::size_t k = 0; k < d; ++k) sum[k] += grads[i][k];
      const std::uint32_t m2 = mask | (1u << i);
      util[m2] = cosine_of_sum(sum, grad_val, nv);
      visit(m2, i + 1);
      for (std::size_t k = 0; k < d; ++k) sum[k] -= grads[i][k];
    }
  };
  visit(0, 0);

  // w[k] = k! (n-k-1)! / n!, built by the ratio recurrence.
  std::vector<double> w(n);
  w[0] = 1.0 / n;
  for (int k = 1; k < n; ++k) w[k] = w[k - 1] * k / (n - k);

  ShapleyVector out;
  out.values.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const std::uint32_t bit = 1u << i;
    double acc = 0.0;
    for (std::uint32_t mask = 0; mask < full; ++mask) {
      if (mask & bit) continue;
      acc += w[std::popcount(mask)] * (util[mask | bit] - util[mask]);
    }
    out.values[i] = acc;
  }
  return out;
}

ShapleyVector shapley_monte_carlo(const std::vector<Vector>& grads,
                                  const Vector& grad_val, int samples,
                                  Rng& rng) {
  const int n = static_cast<int>(grads.size());
  if (n == 0) throw std::invalid_argument("shapley_monte_carlo: no participants");
  if (samples <= 0) throw std::invalid_argument("shapley_monte_carlo: samples <= 0");
  const double nv = checked_grad_val_norm(grad_val);
  const std::size_t d = grad_val.size();
  std::vector<double> mean(n, 0.0), m2(n, 0.0);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Vector sum(d);
  for (int s = 0; s < samples; ++s) {
    std::shuffle(order.begin(), order.end(), rng);
    std::fill(sum.begin(), sum.end(), 0.0);
    double prev = 0.0;  // U(empty)
    for (int pos = 0; pos < n; ++pos) {
      const int i = order[pos];
      for (std::size_t k = 0; k < d; ++k) sum[k] += grads[i][k];
      const double cur = cosine_of_sum(sum, grad_val, nv);
      const double marginal = cur - prev;
      prev = cur;
      // Welford per user.
      const double delta = marginal - mean[i];
      mean[i] += delta / (s + 1);
      m2[i] += delta * (marginal - mean[i]);
    }
  }
  ShapleyVector out;
  out.values = std::move(mean);
  out.std_errors.assign(n, 0.0);
  if (samples > 1) {
    for (int i = 0; i < n; ++i) {
      out.std_errors[i] = std::sqrt(m2[i] / (samples - 1) / samples);
    }
  }
  return out;
}

Vector gradient_aggregate(const std::vector<Vector>& grads) {
  if (grads.empty()) throw std::invalid_argument("gradient_aggregate: empty");
  Vector mean(grads[0].size(), 0.0);
  for (const auto& g : grads) {
    if (g.size() != mean.size()) {
      throw std::invalid_argument("gradient_aggregate: mixed dimensions");
    }
    for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += g[k];
  }
  for (double& v : mean) v /= static_cast<double>(grads.size());
  return mean;
}

}  // namespace pic
