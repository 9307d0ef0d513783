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

#include "pic/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "pic/protocol.hpp"

namespace pic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

struct MeanStd {
  double mean = 0.0, stddev = 0.0;
};

MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd out;
  if (xs.empty()) return out;
  double s = 0.0;
  for (double x : xs) s += x;
  out.mean = s / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return out;
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

Box unit_box(int dim) {
  return Box{Vector(dim, -1.0), Vector(dim, 1.0)};
}

std::vector<Vector> sanitize_all(const std::vector<Vector>& pts,
                                 const MechanismConfig& mech, Rng& rng) {
  std::vector<Vector> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(sanitize(p, mech, rng).debiased);
  return out;
}

void check_trials(const ExperimentConfig& config) {
  if (config.trials < 1) {
    throw std::invalid_argument("config: trials must be >= 1");
  }
}

std::string scenario_name(Scenario s) {
  switch (s) {
    case Scenario::kSingleReport: return "single_report";
    case Scenario::kCrowdsourcing: return "crowdsourcing";
    case Scenario::kSocial: return "social";
    case Scenario::kIncentive: return "incentive";
  }
  return "?";
}

MetricRow base_row(const ExperimentConfig& config, const ResolvedPrivacy& rp) {
  MetricRow row;
  row.scenario = scenario_name(config.scenario);
  row.mechanism = config.mechanism_id;
  row.privacy_mode = rp.label;
  row.eps = rp.eps_column;
  row.eps_local = rp.eps_local;
  row.trials = config.trials;
  row.seed = config.seed;
  return row;
}

MetricRow infeasible_row(const ExperimentConfig& config,
                         const InfeasibleAmplification& err) {
  MetricRow row;
  row.scenario = scenario_name(config.scenario);
  row.mechanism = config.mechanism_id;
  row.privacy_mode = "pic!infeasible";
  row.eps = config.privacy.epsilon_central;
  row.eps_local = 0.0;
  row.metric = "infeasible_min_population";
  row.value = err.min_population;
  row.trials = config.trials;
  row.seed = config.seed;
  return row;
}

// Two-group scenarios: the binding (smaller) resolved budget goes in the
// audit column; a flagged label on either group wins.
ResolvedPrivacy combine(const ResolvedPrivacy& a, const ResolvedPrivacy& b) {
  ResolvedPrivacy out = a;
  out.eps_local = std::min(a.eps_local, b.eps_local);
  if (b.label.find('!') != std::string::npos) out.label = b.label;
  return out;
}

std::vector<Vector> scenario_points(const ExperimentConfig& config, int n,
                                    std::uint64_t stream) {
  if (!config.dataset_path.empty()) {
    const auto raw = load_locations_csv(config.dataset_path);
    if (static_cast<int>(raw.size()) < n) {
      throw std::runtime_error("dataset: need " + std::to_string(n) +
                               " rows, found " + std::to_string(raw.size()));
    }
    // Normalize over the data's own bounding box.
    Box box{raw[0], raw[0]};
    for (const auto& p : raw) {
      for (std::size_t k = 0; k < p.size(); ++k) {
        box.lo[k] = std::min(box.lo[k], p[k]);
        box.hi[k] = std::max(box.hi[k], p[k]);
      }
    }
    auto normalized = normalize_locations(raw, box).points;
    normalized.resize(n);
    return normalized;
  }
  Rng rng = make_trial_rng(config.seed, stream);
  return synth_locations(n, unit_box(config.dim), config.synth, rng);
}

}  // namespace

std::string csv_header() {
  return "scenario,mechanism,privacy_mode,eps,eps_local,metric,value,stddev,"
         "trials,seed";
}

std::string to_csv_line(const MetricRow& row) {
  std::ostringstream os;
  os << row.scenario << ',' << row.mechanism << ',' << row.privacy_mode << ','
     << fmt_double(row.eps) << ',' << fmt_double(row.eps_local) << ','
     << row.metric << ',' << fmt_double(row.value) << ','
     << fmt_double(row.stddev) << ',' << row.trials << ',' << row.seed;
  return os.str();
}

void write_csv(const std::string& path, const std::vector<MetricRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << csv_header() << '\n';
  for (const auto& row : rows) out << to_csv_line(row) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<Vector> load_locations_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset: " + path);
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) {
    throw std::runtime_error(path + ":1: missing header");
  }
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "id,x,y") {
    throw std::runtime_error(path + ":1: header must be \"id,x,y\"");
  }
  std::vector<Vector> out;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto where = path + ":" + std::to_string(lineno);
    std::istringstream ss(line);
    std::string id, xs, ys;
    if (!std::getline(ss, id, ',') || !std::getline(ss, xs, ',') ||
        !std::getline(ss, ys)) {
      throw std::runtime_error(where + ": expected 3 comma-separated fields");
    }
    try {
      std::size_t used = 0;
      const double x = std::stod(xs, &used);
      if (used != xs.size()) throw std::invalid_argument(xs);
      const double y = std::stod(ys, &used);
      if (used != ys.size()) throw std::invalid_argument(ys);
      out.push_back(Vector{x, y});
    } catch (const std::exception&) {
      throw std::runtime_error(where + ": non-numeric coordinate");
    }
  }
  return out;
}

std::vector<Vector> synth_locations(int n, const Box& box,
                                    const SynthSpec& spec, Rng& rng) {
  if (n < 1) throw std::invalid_argument("synth_locations: n < 1");
  const int dim = static_cast<int>(box.lo.size());
  std::vector<Vector> out;
  out.reserve(n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (spec.kind == SynthSpec::Kind::kUniform) {
    for (int i = 0; i < n; ++i) {
      Vector p(dim);
      for (int k = 0; k < dim; ++k) {
        p[k] = box.lo[k] + (box.hi[k] - box.lo[k]) * unit(rng);
      }
      out.push_back(std::move(p));
    }
    return out;
  }
  if (spec.clusters < 1) throw std::invalid_argument("synth: clusters < 1");
  // Centers stay 3 spreads inside the box so clamping rarely distorts the
  // within-cluster spread.
  std::vector<Vector> centers;
  std::normal_distribution<double> jitter(0.0, spec.spread);
  for (int c = 0; c < spec.clusters; ++c) {
    Vector p(dim);
    for (int k = 0; k < dim; ++k) {
      const double margin =
          std::min(3.0 * spec.spread, 0.45 * (box.hi[k] - box.lo[k]));
      p[k] = box.lo[k] + margin +
             (box.hi[k] - box.lo[k] - 2.0 * margin) * unit(rng);
    }
    centers.push_back(std::move(p));
  }
  std::uniform_int_distribution<int> pick(0, spec.clusters - 1);
  for (int i = 0; i < n; ++i) {
    const Vector& c = centers[pick(rng)];
    Vector p(dim);
    for (int k = 0; k < dim; ++k) {
      p[k] = std::clamp(c[k] + jitter(rng), box.lo[k], box.hi[k]);
    }
    out.push_back(std::move(p));
  }
  return out;
}

ResolvedPrivacy resolve_privacy(const PrivacySpec& spec, int group_size) {
  switch (spec.mode) {
    case PrivacyMode::kNone:
      return ResolvedPrivacy{kInf, kInf, "none"};
    case PrivacyMode::kLocal:
      if (std::isinf(spec.epsilon)) return ResolvedPrivacy{kInf, kInf, "none"};
      if (!(spec.epsilon > 0.0)) {
        throw std::invalid_argument("privacy: eps must be > 0");
      }
      return ResolvedPrivacy{spec.epsilon, spec.epsilon, "ldp"};
    case PrivacyMode::kCentral:
      break;
  }
  if (std::isinf(spec.epsilon_central)) {
    return ResolvedPrivacy{kInf, kInf, "none"};
  }
  if (!(spec.epsilon_central > 0.0)) {
    throw std::invalid_argument("privacy: eps-central must be > 0");
  }
  if (group_size < 1) throw std::invalid_argument("privacy: empty group");
  if (spec.policy == PopulationPolicy::kFraction &&
      !(spec.fraction > 0.0 && spec.fraction <= 1.0)) {
    throw std::invalid_argument("privacy: fraction outside (0,1]");
  }
  std::int64_t n_eff;
  try {
    n_eff = effective_population(group_size, spec.policy, spec.fraction);
  } catch (const std::invalid_argument&) {
    // Arguments were pre-validated, so the policy emptied the population.
    const double min_pop = spec.policy == PopulationPolicy::kMinusOne
                               ? 2.0
                               : std::ceil(1.0 / spec.fraction);
    throw InfeasibleAmplification(min_pop);
  }
  const double delta = spec.delta ? *spec.delta
                                  : delta_default(group_size);
  const InvertResult inv =
      invert_amplify(spec.epsilon_central, delta, n_eff);
  std::string label = "pic";
  if (inv.flag == InvertFlag::kBeyondCertified) label = "pic!beyond_certified";
  if (inv.flag == InvertFlag::kAtFloor) label = "pic!at_floor";
  return ResolvedPrivacy{inv.epsilon, spec.epsilon_central, label};
}

Rng make_trial_rng(std::uint64_t seed, std::uint64_t stream) {
  return Rng(splitmix64(splitmix64(seed) ^ splitmix64(~stream)));
}

std::vector<MetricRow> run_single_report(const ExperimentConfig& config) {
  check_trials(config);
  const int n = config.group_sizes.empty() ? 10000 : config.group_sizes[0];
  ResolvedPrivacy rp;
  try {
    rp = resolve_privacy(config.privacy, n);
  } catch (const InfeasibleAmplification& err) {
    return {infeasible_row(config, err)};
  }
  const MechanismConfig mech =
      make_mechanism(config.mechanism_id, rp.eps_local, config.dim,
                     config.domain_shape, config.radius_mode);
  Rng rng = make_trial_rng(config.seed, 17);
  const ErrorStats stats = single_report_error(mech, config.trials, rng);
  MetricRow row = base_row(config, rp);
  row.metric = "l2_error";
  row.value = stats.mean;
  row.stddev = stats.stddev;
  return {row};
}

double travel_cost(const Matching& m, const std::vector<Vector>& true_a,
                   const std::vector<Vector>& true_b) {
  double total = 0.0;
  for (const auto& [i, j] : m.pairs) {
    double s = 0.0;
    const Vector& a = true_a.at(i);
    const Vector& b = true_b.at(j);
    for (std::size_t k = 0; k < a.size(); ++k) {
      s += (a[k] - b[k]) * (a[k] - b[k]);
    }
    total += std::sqrt(s);
  }
  return total;
}

double success_ratio(const Matching& m, const std::vector<Vector>& true_a,
                     const std::vector<Vector>& true_b, double tau) {
  const std::size_t denom = std::min(true_a.size(), true_b.size());
  if (denom == 0) return 0.0;
  std::size_t good = 0;
  for (const auto& [i, j] : m.pairs) {
    double s = 0.0;
    const Vector& a = true_a.at(i);
    const Vector& b = true_b.at(j);
    for (std::size_t k = 0; k < a.size(); ++k) {
      s += (a[k] - b[k]) * (a[k] - b[k]);
    }
    if (std::sqrt(s) <= tau) ++good;
  }
  return static_cast<double>(good) / static_cast<double>(denom);
}

F1Stats neighbor_f1(const std::vector<std::vector<int>>& truth,
                    const std::vector<std::vector<int>>& estimate) {
  if (truth.size() != estimate.size()) {
    throw std::invalid_argument("neighbor_f1: size mismatch");
  }
  // Inputs are sorted ascending (radius_nn contract).
  std::size_t hit = 0, est_total = 0, true_total = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    est_total += estimate[i].size();
    true_total += truth[i].size();
    std::size_t a = 0, b = 0;
    while (a < truth[i].size() && b < estimate[i].size()) {
      if (truth[i][a] < estimate[i][b]) {
        ++a;
      } else if (truth[i][a] > estimate[i][b]) {
        ++b;
      } else {
        ++hit;
        ++a;
        ++b;
      }
    }
  }
  F1Stats out{0.0, 0.0, 0.0};
  if (est_total > 0) out.precision = static_cast<double>(hit) / est_total;
  if (true_total > 0) out.recall = static_cast<double>(hit) / true_total;
  if (out.precision + out.recall > 0.0) {
    out.f1 = 2.0 * out.precision * out.recall / (out.precision + out.recall);
  }
  return out;
}

std::vector<MetricRow> run_crowdsourcing(const ExperimentConfig& config) {
  check_trials(config);
  int na = 713, nb = 532;
  if (!config.group_sizes.empty()) {
    if (config.group_sizes.size() != 2) {
      throw std::invalid_argument("crowdsourcing: need exactly 2 group sizes");
    }
    na = config.group_sizes[0];
    nb = config.group_sizes[1];
  }
  ResolvedPrivacy rp_a, rp_b;
  try {
    rp_a = resolve_privacy(config.privacy, na);
    rp_b = resolve_privacy(config.privacy, nb);
  } catch (const InfeasibleAmplification& err) {
    return {infeasible_row(config, err)};
  }
  std::vector<Vector> true_a, true_b;
  if (!config.dataset_path.empty()) {
    const auto all = scenario_points(config, na + nb, 23);
    true_a.assign(all.begin(), all.begin() + na);
    true_b.assign(all.begin() + na, all.end());
  } else {
    Rng rng = make_trial_rng(config.seed, 23);
    true_a = synth_locations(na, unit_box(config.dim), config.synth, rng);
    true_b = synth_locations(nb, unit_box(config.dim), config.synth, rng);
  }
  const MechanismConfig mech_a =
      make_mechanism(config.mechanism_id, rp_a.eps_local, config.dim,
                     config.domain_shape, config.radius_mode);
  const MechanismConfig mech_b =
      make_mechanism(config.mechanism_id, rp_b.eps_local, config.dim,
                     config.domain_shape, config.radius_mode);
  std::vector<double> travel, success;
  for (int t = 0; t < config.trials; ++t) {
    Rng rng = make_trial_rng(config.seed, 1000 + static_cast<std::uint64_t>(t));
    const auto deb_a = sanitize_all(true_a, mech_a, rng);
    const auto deb_b = sanitize_all(true_b, mech_b, rng);
    const Matching mw = min_weight_full_matching(deb_a, deb_b);
    travel.push_back(travel_cost(mw, true_a, true_b));
    const Matching mm = max_matching_within_radius(deb_a, deb_b, config.tau);
    success.push_back(success_ratio(mm, true_a, true_b, config.tau));
  }
  const ResolvedPrivacy rp = combine(rp_a, rp_b);
  std::vector<MetricRow> rows;
  MetricRow row = base_row(config, rp);
  const MeanStd tc = mean_std(travel);
  row.metric = "travel_cost";
  row.value = tc.mean;
  row.stddev = tc.stddev;
  rows.push_back(row);
  const MeanStd sr = mean_std(success);
  row.metric = "success_ratio";
  row.value = sr.mean;
  row.stddev = sr.stddev;
  rows.push_back(row);
  return rows;
}

std::vector<MetricRow> run_social(const ExperimentConfig& config) {
  check_trials(config);
  const int n = config.group_sizes.empty() ? 10000 : config.group_sizes[0];
  PrivacySpec spec = config.privacy;
  if (spec.mode == PrivacyMode::kCentral && !spec.policy_explicit) {
    // Scenario default: part of the population is expected to deanonymize
    // itself post-computation, more so for the looser radius.
    spec.policy = PopulationPolicy::kFraction;
    spec.fraction = config.tau <= 0.15 ? 0.98 : 0.90;
  }
  ResolvedPrivacy rp;
  try {
    rp = resolve_privacy(spec, n);
  } catch (const InfeasibleAmplification& err) {
    return {infeasible_row(config, err)};
  }
  const auto pts = scenario_points(config, n, 29);
  const auto truth = radius_nn(pts, config.tau, /*use_grid=*/true);
  const MechanismConfig mech =
      make_mechanism(config.mechanism_id, rp.eps_local, config.dim,
                     config.domain_shape, config.radius_mode);
  std::vector<double> ps, rs, f1s;
  for (int t = 0; t < config.trials; ++t) {
    Rng rng = make_trial_rng(config.seed, 3000 + static_cast<std::uint64_t>(t));
    const auto deb = sanitize_all(pts, mech, rng);
    const auto est = radius_nn(deb, config.tau, /*use_grid=*/true);
    const F1Stats f = neighbor_f1(truth, est);
    ps.push_back(f.precision);
    rs.push_back(f.recall);
    f1s.push_back(f.f1);
  }
  std::vector<MetricRow> rows;
  MetricRow row = base_row(config, rp);
  for (const auto& [name, vals] :
       {std::pair<const char*, const std::vector<double>*>{"precision", &ps},
        {"recall", &rs},
        {"f1", &f1s}}) {
    const MeanStd ms = mean_std(*vals);
    row.metric = name;
    row.value = ms.mean;
    row.stddev = ms.stddev;
    rows.push_back(row);
  }
  return rows;
}

std::vector<MetricRow> run_incentive(const ExperimentConfig& config) {
  check_trials(config);
  const int n = config.group_sizes.empty() ? 100 : config.group_sizes[0];
  if (n < 1) throw std::invalid_argument("incentive: empty group");
  if (!(config.clip > 0.0)) throw std::invalid_argument("incentive: clip <= 0");
  ResolvedPrivacy rp;
  try {
    rp = resolve_privacy(config.privacy, n);
  } catch (const InfeasibleAmplification& err) {
    return {infeasible_row(config, err)};
  }
  const int d = config.dim;
  Rng gen = make_trial_rng(config.seed, 31);
  std::normal_distribution<double> gauss(0.0, 0.5);
  auto draw_clipped = [&]() {
    Vector g(d);
    for (int k = 0; k < d; ++k) {
      g[k] = std::clamp(gauss(gen), -config.clip, config.clip);
    }
    return g;
  };
  std::vector<Vector> grads;
  grads.reserve(n);
  for (int i = 0; i < n; ++i) grads.push_back(draw_clipped());
  Vector grad_val = draw_clipped();
  while (norm_l2(grad_val) == 0.0) grad_val = draw_clipped();

  const bool exact = n <= 12;
  auto shapley_of = [&](const std::vector<Vector>& g) {
    if (exact) return shapley_exact(g, grad_val);
    Rng mc = make_trial_rng(config.seed, 37);  // matched across clear/noisy
    return shapley_monte_carlo(g, grad_val, config.shapley_samples, mc);
  };
  const ShapleyVector clear_shap = shapley_of(grads);

  const MechanismConfig mech =
      make_mechanism(config.mechanism_id, rp.eps_local, d, Shape::kCube,
                     config.radius_mode);
  std::vector<double> grad_errs, shap_errs;
  for (int t = 0; t < config.trials; ++t) {
    Rng rng = make_trial_rng(config.seed, 4000 + static_cast<std::uint64_t>(t));
    std::vector<Vector> noisy;
    noisy.reserve(n);
    double gerr = 0.0;
    for (int i = 0; i < n; ++i) {
      Vector scaled(d);
      for (int k = 0; k < d; ++k) scaled[k] = grads[i][k] / config.clip;
      Vector deb = sanitize(scaled, mech, rng).debiased;
      for (int k = 0; k < d; ++k) deb[k] *= config.clip;
      double s = 0.0;
      for (int k = 0; k < d; ++k) {
        s += (deb[k] - grads[i][k]) * (deb[k] - grads[i][k]);
      }
      gerr += std::sqrt(s);
      noisy.push_back(std::move(deb));
    }
    grad_errs.push_back(gerr / n);
    const ShapleyVector noisy_shap = shapley_of(noisy);
    double serr = 0.0;
    for (int i = 0; i < n; ++i) {
      serr += std::abs(noisy_shap.values[i] - clear_shap.values[i]);
    }
    shap_errs.push_back(serr / n);
  }
  std::vector<MetricRow> rows;
  MetricRow row = base_row(config, rp);
  const MeanStd ge = mean_std(grad_errs);
  row.metric = "gradient_l2_error";
  row.value = ge.mean;
  row.stddev = ge.stddev;
  rows.push_back(row);
  const MeanStd se = mean_std(shap_errs);
  row.metric = "shapley_l2_error";
  row.value = se.mean;
  row.stddev = se.stddev;
  rows.push_back(row);
  return rows;
}

namespace {

double rate_upper_bound(int d, double eps_c, double delta, double n) {
  const double big_l = std::log(1.0 / delta);
  const double k = std::expm1(eps_c);
  return 36.0 * std::pow(256.0 * big_l / (n * k * k), 2.0 / (d + 2));
}

bool rate_feasible(int d, double eps_c, double delta, double n) {
  const double big_l = std::log(1.0 / delta);
  const double k = std::expm1(eps_c);
  const double bound = std::max(16.0 * big_l,
                                std::ldexp(big_l, d + 7) / (k * k));
  return n > bound;
}

}  // namespace

std::vector<MetricRow> theoretical_rates(
    int d, double eps_c, double delta, const std::vector<std::int64_t>& n_grid) {
  if (d < 1) throw std::invalid_argument("rates: d < 1");
  if (!(eps_c > 0.0)) throw std::invalid_argument("rates: eps_c <= 0");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("rates: delta outside (0,1)");
  }
  std::vector<MetricRow> rows;
  for (std::int64_t n : n_grid) {
    if (n < 1) throw std::invalid_argument("rates: n < 1");
    MetricRow row;
    row.scenario = "rates";
    row.mechanism = "minkowski";
    row.privacy_mode = rate_feasible(d, eps_c, delta, static_cast<double>(n))
                           ? "theory"
                           : "theory!infeasible";
    row.eps = eps_c;
    row.eps_local = 0.0;
    row.trials = 0;
    row.seed = 0;
    row.metric = "upper_bound_n" + std::to_string(n);
    row.value = rate_upper_bound(d, eps_c, delta, static_cast<double>(n));
    rows.push_back(row);
    row.metric = "lower_unfitted_n" + std::to_string(n);
    row.value = std::pow(static_cast<double>(n), -2.0 / (d + 2));
    rows.push_back(row);
  }
  return rows;
}

std::vector<ScalingPoint> scaling_sweep(int d, double eps_c, double delta,
                                        const std::vector<std::int64_t>& n_grid,
                                        int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("scaling_sweep: trials < 1");
  std::vector<ScalingPoint> out;
  for (std::int64_t n : n_grid) {
    const InvertResult inv = invert_amplify(eps_c, delta, n);
    const MechanismConfig mech = make_mechanism(
        "minkowski", inv.epsilon, d, Shape::kBall, RadiusMode::kSearched);
    Rng rng = make_trial_rng(seed, static_cast<std::uint64_t>(n));
    const ErrorStats stats =
        single_report_error(mech, trials, rng, /*squared=*/true);
    out.push_back(ScalingPoint{
        n, inv.epsilon, stats.mean,
        rate_upper_bound(d, eps_c, delta, static_cast<double>(n)),
        rate_feasible(d, eps_c, delta, static_cast<double>(n)), inv.flag});
  }
  return out;
}

std::string run_protocol_demo(const ExperimentConfig& config) {
  check_trials(config);
  std::vector<int> sizes = config.group_sizes;
  if (sizes.empty()) sizes = {5, 5};
  ResolvedPrivacy rp = resolve_privacy(config.privacy, sizes[0]);
  Rng rng = make_trial_rng(config.seed, 41);

  std::vector<GroupSpec> specs;
  for (std::size_t g = 0; g < sizes.size(); ++g) {
    specs.push_back(GroupSpec{make_mechanism(config.mechanism_id, rp.eps_local,
                                             config.dim, config.domain_shape,
                                             config.radius_mode)});
  }
  ServerSetup setup = server_setup(specs, "identity", EntropyMode::kSeeded, rng);

  std::vector<std::vector<UserState>> users(sizes.size());
  for (std::size_t g = 0; g < sizes.size(); ++g) {
    const auto pts =
        synth_locations(sizes[g], unit_box(config.dim), config.synth, rng);
    for (int i = 0; i < sizes[g]; ++i) {
      users[g].push_back(UserState{static_cast<int>(g), pts[i]});
    }
  }
  // Demonstrate corruption leakage on the first user of each group.
  std::vector<std::vector<std::size_t>> corrupted(sizes.size());
  for (auto& c : corrupted) c.push_back(0);

  const RoundResult result =
      run_round(users, setup.params, setup.server_keys, make_identity_task(),
                corrupted, EntropyMode::kSeeded, rng, /*keep_detail=*/false);

  std::size_t delivered = 0, total = 0;
  for (auto& group : users) {
    for (auto& u : group) {
      ++total;
      const Bytes payload =
          user_retrieve(result.bulletin[static_cast<std::size_t>(u.group_index)], u);
      const DecodedReport rep = decode_report(payload);
      if (rep.public_key == u.pseudonym()) ++delivered;
    }
  }

  std::ostringstream os;
  os << "protocol demo: task=identity mechanism=" << config.mechanism_id
     << " eps_local=" << fmt_double(rp.eps_local) << " mode=" << rp.label
     << "\n";
  for (std::size_t g = 0; g < sizes.size(); ++g) {
    os << "group " << g << ": envelopes="
       << result.transcript.envelope_counts[g] << " bulletin="
       << result.bulletin[g].size() << " leakage=[";
    for (std::size_t k = 0; k < result.transcript.leakage[g].size(); ++k) {
      const auto& [from, to] = result.transcript.leakage[g][k];
      os << (k ? " " : "") << from << "->" << to;
    }
    os << "]\n";
  }
  os << "delivery: " << delivered << "/" << total << " ("
     << fmt_double(static_cast<double>(delivered) / total) << ")\n";
  return os.str();
}

}  // namespace pic
