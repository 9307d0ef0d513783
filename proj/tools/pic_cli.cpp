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

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pic/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;

struct RawOpts {
  std::string mechanism = "minkowski";
  std::optional<double> eps;
  std::optional<double> eps_central;
  std::optional<double> delta;
  std::vector<std::int64_t> n;
  std::vector<int> groups;
  double tau = 0.4;
  int trials = 10;
  std::uint64_t seed = 1;
  std::string dataset;
  std::string out;
  std::string policy;
};

void apply_policy(pic::PrivacySpec& spec, const std::string& text) {
  if (text.empty()) return;
  spec.policy_explicit = true;
  if (text == "full") {
    spec.policy = pic::PopulationPolicy::kFull;
  } else if (text == "minus-one") {
    spec.policy = pic::PopulationPolicy::kMinusOne;
  } else if (text.rfind("fraction=", 0) == 0) {
    spec.policy = pic::PopulationPolicy::kFraction;
    std::size_t used = 0;
    const std::string value = text.substr(9);
    spec.fraction = std::stod(value, &used);
    if (used != value.size()) {
      throw std::invalid_argument("--policy: bad fraction \"" + value + "\"");
    }
  } else {
    throw std::invalid_argument(
        "--policy must be full, minus-one, or fraction=F");
  }
}

pic::ExperimentConfig build_config(const RawOpts& raw, pic::Scenario scenario) {
  pic::ExperimentConfig cfg;
  cfg.scenario = scenario;
  cfg.mechanism_id = raw.mechanism;
  cfg.tau = raw.tau;
  cfg.trials = raw.trials;
  cfg.seed = raw.seed;
  cfg.dataset_path = raw.dataset;
  cfg.out_path = raw.out;
  if (raw.eps && raw.eps_central) {
    throw std::invalid_argument("pass exactly one of --eps / --eps-central");
  }
  if (raw.eps_central) {
    cfg.privacy.mode = pic::PrivacyMode::kCentral;
    cfg.privacy.epsilon_central = *raw.eps_central;
  } else {
    const double eps = raw.eps.value_or(1.0);
    cfg.privacy.mode = std::isinf(eps) ? pic::PrivacyMode::kNone
                                       : pic::PrivacyMode::kLocal;
    cfg.privacy.epsilon = eps;
  }
  cfg.privacy.delta = raw.delta;
  apply_policy(cfg.privacy, raw.policy);
  if (!raw.groups.empty()) {
    cfg.group_sizes = raw.groups;
  } else if (!raw.n.empty()) {
    cfg.group_sizes = {static_cast<int>(raw.n[0])};
  }
  return cfg;
}

int emit(const std::vector<pic::MetricRow>& rows, const std::string& out) {
  std::cout << pic::csv_header() << '\n';
  for (const auto& row : rows) std::cout << pic::to_csv_line(row) << '\n';
  if (!out.empty()) pic::write_csv(out, rows);
  for (const auto& row : rows) {
    if (row.privacy_mode == "pic!infeasible") return kExitInfeasible;
  }
  return kExitOk;
}

std::vector<pic::MetricRow> run_amplify(const RawOpts& raw) {
  if (raw.n.empty()) {
    throw std::invalid_argument("amplify: --n <population> is required");
  }
  const std::int64_t n = raw.n[0];
  pic::PrivacySpec spec;
  apply_policy(spec, raw.policy);
  const std::int64_t n_eff =
      pic::effective_population(n, spec.policy, spec.fraction);
  const double delta = raw.delta ? *raw.delta : pic::delta_default(n);

  pic::MetricRow row;
  row.scenario = "amplify";
  row.mechanism = "-";
  row.trials = 0;
  row.seed = 0;
  if (raw.eps && raw.eps_central) {
    throw std::invalid_argument("pass exactly one of --eps / --eps-central");
  }
  if (raw.eps_central) {
    const pic::InvertResult inv =
        pic::invert_amplify(*raw.eps_central, delta, n_eff);
    row.privacy_mode = inv.flag == pic::InvertFlag::kBeyondCertified
                           ? "pic!beyond_certified"
                           : (inv.flag == pic::InvertFlag::kAtFloor
                                  ? "pic!at_floor"
                                  : "pic");
    row.eps = *raw.eps_central;
    row.eps_local = inv.epsilon;
    row.metric = "eps_local";
    row.value = inv.epsilon;
    return {row};
  }
  if (!raw.eps) {
    throw std::invalid_argument("amplify: pass --eps or --eps-central");
  }
  // Forward direction: the certified bound (throws when infeasible).
  const double eps_c = pic::amplify_closed_form(*raw.eps, delta, n_eff);
  row.privacy_mode = "pic";
  row.eps = eps_c;
  row.eps_local = *raw.eps;
  row.metric = "eps_central";
  row.value = eps_c;
  return {row};
}

std::vector<pic::MetricRow> run_rates(const RawOpts& raw) {
  const double eps_c = raw.eps_central.value_or(raw.eps.value_or(1.0));
  const double delta = raw.delta.value_or(1e-6);
  std::vector<std::int64_t> grid = raw.n;
  if (grid.empty()) {
    for (int p = 10; p <= 17; ++p) grid.push_back(std::int64_t{1} << p);
  }
  return pic::theoretical_rates(2, eps_c, delta, grid);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shuffle-model DP toolkit: randomizers, amplification "
               "accounting, encrypted-shuffle protocol, and task benchmarks"};
  app.set_config("--config", "",
                 "flat key=value configuration file; flags override it");
  app.require_subcommand(1);

  RawOpts raw;
  app.add_option("--mechanism", raw.mechanism,
                 "minkowski | laplace | planar_laplace | square_wave | "
                 "staircase")
      ->configurable(true);
  app.add_option("--eps", raw.eps, "local privacy budget (inf for no noise)");
  app.add_option("--eps-central", raw.eps_central,
                 "central (eps_c, delta) target; resolves the local budget "
                 "through amplification");
  app.add_option("--delta", raw.delta, "amplification delta (default 0.01/n)");
  app.add_option("--n", raw.n,
                 "population / grid sizes (comma separated for rates)")
      ->delimiter(',');
  app.add_option("--groups", raw.groups,
                 "per-group sizes, comma separated (e.g. 713,532)")
      ->delimiter(',');
  app.add_option("--tau", raw.tau, "matching / neighborhood radius");
  app.add_option("--trials", raw.trials, "repeat count per sweep point");
  app.add_option("--seed", raw.seed, "rng seed");
  app.add_option("--dataset", raw.dataset, "locations CSV with header id,x,y");
  app.add_option("--out", raw.out, "output CSV path");
  app.add_option("--policy", raw.policy,
                 "effective-population policy: full, minus-one, fraction=F");

  auto* cmd_randomize =
      app.add_subcommand("randomize", "single-report error sweeps");
  auto* cmd_amplify =
      app.add_subcommand("amplify", "amplification budget calculator");
  auto* cmd_crowd =
      app.add_subcommand("crowdsourcing", "matching metrics on two groups");
  auto* cmd_social =
      app.add_subcommand("social", "radius-neighbor precision/recall/F1");
  auto* cmd_incentive =
      app.add_subcommand("incentive", "gradient and Shapley error metrics");
  auto* cmd_demo =
      app.add_subcommand("protocol-demo", "one full round with transcript");
  auto* cmd_rates =
      app.add_subcommand("rates", "theoretical error-rate reference curves");
  for (auto* sub : {cmd_randomize, cmd_amplify, cmd_crowd, cmd_social,
                    cmd_incentive, cmd_demo, cmd_rates}) {
    sub->fallthrough();  // global flags may follow the subcommand
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (cmd_demo->parsed()) {
      const auto cfg = build_config(raw, pic::Scenario::kSingleReport);
      const std::string text = pic::run_protocol_demo(cfg);
      std::cout << text;
      if (!raw.out.empty()) {
        std::ofstream f(raw.out, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open " + raw.out);
        f << text;
      }
      return kExitOk;
    }
    if (cmd_amplify->parsed()) return emit(run_amplify(raw), raw.out);
    if (cmd_rates->parsed()) return emit(run_rates(raw), raw.out);
    if (cmd_randomize->parsed()) {
      return emit(pic::run_single_report(
                      build_config(raw, pic::Scenario::kSingleReport)),
                  raw.out);
    }
    if (cmd_crowd->parsed()) {
      return emit(pic::run_crowdsourcing(
                      build_config(raw, pic::Scenario::kCrowdsourcing)),
                  raw.out);
    }
    if (cmd_social->parsed()) {
      return emit(pic::run_social(build_config(raw, pic::Scenario::kSocial)),
                  raw.out);
    }
    if (cmd_incentive->parsed()) {
      return emit(
          pic::run_incentive(build_config(raw, pic::Scenario::kIncentive)),
          raw.out);
    }
    std::cerr << "configuration error: no subcommand\n";
    return kExitConfig;
  } catch (const pic::InfeasibleAmplification& e) {
    std::cerr << "amplification infeasible: " << e.what()
              << " (minimum population " << e.min_population << ")\n";
    return kExitInfeasible;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}
