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
#include <optional>
#include <string>
#include <vector>

#include "pic/amplification.hpp"
#include "pic/randomizer.hpp"
#include "pic/tasks.hpp"

namespace pic {

// Experiment orchestration: synthetic data, dataset ingestion, metric
// computation, and CSV emission for the four evaluation scenarios plus the
// theoretical reference curves.

enum class Scenario { kSingleReport, kCrowdsourcing, kSocial, kIncentive };

// kLocal: the randomizer gets epsilon directly. kCentral: epsilon_central is
// a central (eps_c, delta) target; the local budget is recovered through
// amplification over the effective population. kNone: no perturbation.
enum class PrivacyMode { kLocal, kCentral, kNone };

struct PrivacySpec {
  PrivacyMode mode = PrivacyMode::kLocal;
  double epsilon = 1.0;          // kLocal budget
  double epsilon_central = 1.0;  // kCentral target
  std::optional<double> delta;   // default: 0.01 / group size
  PopulationPolicy policy = PopulationPolicy::kFull;
  double fraction = 1.0;
  // Set when the user chose a policy; otherwise scenario defaults apply
  // (social picks Fraction(0.90) at tau = 0.2 and Fraction(0.98) at
  // tau = 0.1).
  bool policy_explicit = false;
};

struct SynthSpec {
  enum class Kind { kUniform, kClusters };
  Kind kind = Kind::kUniform;
  int clusters = 3;
  double spread = 0.1;
};

struct ExperimentConfig {
  Scenario scenario = Scenario::kSingleReport;
  std::string mechanism_id = "minkowski";
  PrivacySpec privacy;
  std::vector<int> group_sizes;  // scenario default if empty
  double tau = 0.4;
  int trials = 10;
  std::uint64_t seed = 1;
  int dim = 2;
  Shape domain_shape = Shape::kCube;
  RadiusMode radius_mode = RadiusMode::kSearched;
  SynthSpec synth;
  std::string dataset_path;  // empty: synthetic
  std::string out_path;      // empty: stdout only
  double clip = 1.0;         // incentive: ||g||_inf clip
  int shapley_samples = 20000;
};

struct MetricRow {
  std::string scenario;
  std::string mechanism;
  std::string privacy_mode;  // "ldp", "pic", "pic!...", "none", "theory"
  double eps = 0.0;          // budget as configured (local or central)
  double eps_local = 0.0;    // resolved per-report budget (audit column)
  std::string metric;
  double value = 0.0;
  double stddev = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
};

// Fixed schema; emitted bytes are deterministic for a given row list.
std::string csv_header();
std::string to_csv_line(const MetricRow& row);
void write_csv(const std::string& path, const std::vector<MetricRow>& rows);

// Header must be exactly "id,x,y"; any malformed row raises
// std::runtime_error naming the 1-based line. Points come back in source
// coordinates (normalize via normalize_locations).
std::vector<Vector> load_locations_csv(const std::string& path);

std::vector<Vector> synth_locations(int n, const Box& box,
                                    const SynthSpec& spec, Rng& rng);

// Local budget resolution for one group. Throws InfeasibleAmplification when
// the effective population is below the certification boundary.
struct ResolvedPrivacy {
  double eps_local;    // +inf for PrivacyMode::kNone
  double eps_column;   // value for the eps CSV column
  std::string label;   // privacy_mode CSV value
};
ResolvedPrivacy resolve_privacy(const PrivacySpec& spec, int group_size);

// Deterministic per-trial stream: trials never share rng state.
Rng make_trial_rng(std::uint64_t seed, std::uint64_t stream);

// Scenario runners. Infeasible amplification yields a single
// "infeasible_min_population" row labeled "pic!infeasible" instead of
// metrics (never silently dropped).
std::vector<MetricRow> run_single_report(const ExperimentConfig& config);
std::vector<MetricRow> run_crowdsourcing(const ExperimentConfig& config);
std::vector<MetricRow> run_social(const ExperimentConfig& config);
std::vector<MetricRow> run_incentive(const ExperimentConfig& config);

// Reference curves over an n grid at fixed (d, eps_c, delta): the explicit
// upper curve 36 * (256 log(1/delta) / (n (e^eps_c - 1)^2))^(2/(d+2)) and
// the lower-order curve n^(-2/(d+2)) up to an unfitted constant. Points
// failing n > max{16 log(1/delta), 2^(d+7) log(1/delta)/(e^eps_c - 1)^2}
// are labeled "theory!infeasible". The grid n is encoded in the metric name
// ("upper_bound_n4096").
std::vector<MetricRow> theoretical_rates(int d, double eps_c, double delta,
                                         const std::vector<std::int64_t>& n_grid);

// Empirical mean squared single-report error of the central-mode Minkowski
// randomizer (ball domain, searched radius) across a population grid, with
// the matching upper-curve values; backs the scaling-law check.
struct ScalingPoint {
  std::int64_t n;
  double eps_local;
  double mean_sq_error;
  double upper_bound;
  bool feasible;
  InvertFlag flag;
};
std::vector<ScalingPoint> scaling_sweep(int d, double eps_c, double delta,
                                        const std::vector<std::int64_t>& n_grid,
                                        int trials, std::uint64_t seed);

// Metric primitives (matching computed on sanitized data, metrics on true
// locations).
double travel_cost(const Matching& m, const std::vector<Vector>& true_a,
                   const std::vector<Vector>& true_b);
double success_ratio(const Matching& m, const std::vector<Vector>& true_a,
                     const std::vector<Vector>& true_b, double tau);
struct F1Stats {
  double precision, recall, f1;
};
F1Stats neighbor_f1(const std::vector<std::vector<int>>& truth,
                    const std::vector<std::vector<int>>& estimate);

// One full protocol round (2 groups, identity task) with a seeded rng;
// returns a human-readable transcript summary for the CLI.
std::string run_protocol_demo(const ExperimentConfig& config);

}  // namespace pic
