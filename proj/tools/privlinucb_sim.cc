// Copyright 2026 The privlinucb Authors.
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

// Command-line driver for the private LinUCB experiments.
//
//   privlinucb_sim --experiment exp2 --n 200000 --repeats 10 --out exp2.csv
//   privlinucb_sim --config run.cfg --seed 7
//
// Exit codes: 0 success, 1 configuration error, 2 runtime error.

#include <cstdint>
#include <exception>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "CLI11.hpp"
#include "privlinucb/errors.h"
#include "privlinucb/harness.h"

namespace {

using privlinucb::Error;
using privlinucb::ErrorCode;
using privlinucb::RegretTrace;
using privlinucb::RunConfig;

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

std::optional<double> ParseGap(const std::string& text) {
  if (text == "none" || text == "0") return std::nullopt;
  if (text == "forced") return 0.1;
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size() && v > 0.0) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::kInvalidArgument,
              "gap must be 'none', 'forced' or a positive number, got '" +
                  text + "'");
}

privlinucb::RewardModel ParseReward(const std::string& text) {
  if (text == "pm1") return privlinucb::RewardModel::kPlusMinusOne;
  if (text == "gaussian") return privlinucb::RewardModel::kGaussianNoise;
  throw Error(ErrorCode::kInvalidArgument,
              "reward must be 'pm1' or 'gaussian', got '" + text + "'");
}

void PrintSummary(const RunConfig& cfg, const std::vector<RegretTrace>& traces) {
  // Group by everything but the seed.
  using Key = std::tuple<std::string, double, int>;
  std::map<Key, std::vector<const RegretTrace*>> groups;
  for (const RegretTrace& tr : traces) {
    if (!tr.error) groups[{tr.mechanism, tr.gap, tr.d}].push_back(&tr);
  }
  std::vector<std::pair<double, double>> by_dim;
  for (const auto& [key, members] : groups) {
    const auto curve = privlinucb::MeanCurve(members);
    const double final_regret = curve.empty() ? 0.0 : curve.back().cum_regret;
    std::cerr << "summary mechanism=" << std::get<0>(key)
              << " gap=" << std::get<1>(key) << " d=" << std::get<2>(key)
              << " runs=" << members.size()
              << " mean_final_regret=" << final_regret << '\n';
    by_dim.emplace_back(std::get<2>(key), final_regret);
  }
  if (cfg.experiment == privlinucb::Experiment::kExp1RegretVsDim &&
      by_dim.size() >= 3) {
    try {
      std::cerr << "summary loglog_slope=" << privlinucb::FitLogLogSlope(by_dim)
                << '\n';
    } catch (const Error& e) {
      std::cerr << "summary loglog_slope unavailable: " << e.what() << '\n';
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Jointly differentially private LinUCB simulator"};
  app.set_config("--config", "", "Flat key=value file; flags override it");

  RunConfig cfg;
  std::string experiment = "single";
  std::string mechanism = "nonprivate";
  std::string gap = "forced";
  std::string reward = "pm1";
  std::optional<double> alpha;

  app.add_option("--experiment", experiment,
                 "single | exp1 | exp2 | exp3")
      ->capture_default_str();
  app.add_option("--n", cfg.n, "Horizon")->capture_default_str();
  app.add_option("--d", cfg.d, "Action dimension")->capture_default_str();
  app.add_option("--K", cfg.K, "Actions per round (0 = d^2)")
      ->capture_default_str();
  app.add_option("--eps", cfg.eps, "Privacy epsilon")->capture_default_str();
  app.add_option("--delta", cfg.delta, "Privacy delta")->capture_default_str();
  app.add_option("--mechanism", mechanism,
                 "nonprivate | gaussian | wishart | wishart-unshifted")
      ->capture_default_str();
  app.add_option("--rho", cfg.rho, "Regularizer of the non-private baseline")
      ->capture_default_str();
  app.add_option("--gap", gap, "none | forced | <positive gap>")
      ->capture_default_str();
  app.add_option("--reward", reward, "pm1 | gaussian")->capture_default_str();
  app.add_option("--reward-sigma", cfg.reward_sigma,
                 "Noise scale of gaussian rewards")
      ->capture_default_str();
  app.add_option("--alpha", alpha, "Confidence parameter (default 1/n)");
  app.add_option("--repeats", cfg.repeats, "Runs per grid cell")
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "Base seed; repeat r uses seed + r")
      ->capture_default_str();
  app.add_option("--out", cfg.out, "CSV output path (stdout if empty)");
  app.add_option("--checkpoints", cfg.checkpoints,
                 "Number of log-spaced checkpoints")
      ->capture_default_str();
  app.add_option("--threads", cfg.threads, "Concurrent runs")
      ->capture_default_str();
  app.add_option("--dims", cfg.dims, "Dimension grid for exp1")
      ->delimiter(',');
  app.add_option("--rho-min-multipliers", cfg.rho_min_multipliers,
                 "rho_min grid for exp3, relative to each default")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  std::vector<RegretTrace> traces;
  try {
    cfg.experiment = privlinucb::ParseExperiment(experiment);
    cfg.mechanism = privlinucb::ParseMechanism(mechanism);
    cfg.gap = ParseGap(gap);
    cfg.reward_model = ParseReward(reward);
    cfg.alpha = alpha;
    cfg.Validate();
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    traces = privlinucb::RunExperiment(cfg);
    for (const RegretTrace& tr : traces) privlinucb::WriteMetadata(tr, std::cerr);
    if (cfg.out.empty()) {
      privlinucb::WriteCsv(traces, std::cout);
    } else {
      privlinucb::WriteCsv(traces, cfg.out);
    }
    PrintSummary(cfg, traces);
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
