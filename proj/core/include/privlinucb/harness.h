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

#ifndef PRIVLINUCB_HARNESS_H_
#define PRIVLINUCB_HARNESS_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "privlinucb/environment.h"
#include "privlinucb/noise.h"
#include "privlinucb/simulation.h"

namespace privlinucb {

enum class Experiment {
  kSingle,
  kExp1RegretVsDim,
  kExp2VariantComparison,
  kExp3ShiftSweep,
};

std::string_view ExperimentName(Experiment e);
Experiment ParseExperiment(std::string_view name);

struct RunConfig {
  Experiment experiment = Experiment::kSingle;
  std::int64_t n = 100000;
  int d = 5;
  int K = 0;  // 0 means d^2
  MechanismKind mechanism = MechanismKind::kNonPrivate;
  double eps = 1.0;
  double delta = 0.1;
  double rho = 1.0;
  std::optional<double> gap = 0.1;
  RewardModel reward_model = RewardModel::kPlusMinusOne;
  double reward_sigma = 1.0;
  std::optional<double> alpha;  // defaults to 1/n
  int repeats = 1;
  std::uint64_t seed = 1;
  std::string out;
  int checkpoints = 200;
  int threads = 1;
  std::vector<int> dims = {4, 8, 16, 32, 64};
  // rho_min multipliers for the shift sweep, relative to each mechanism's
  // default rho_min.
  std::vector<double> rho_min_multipliers = DefaultRhoMinMultipliers();

  double Alpha() const { return alpha ? *alpha : 1.0 / static_cast<double>(n); }
  // Throws kInvalidArgument.
  void Validate() const;

  static std::vector<double> DefaultRhoMinMultipliers();
};

// One run of the grid.
struct CellSpec {
  int run_id = 0;
  Experiment experiment = Experiment::kSingle;
  SimulationSpec sim;
};

struct Checkpoint {
  std::int64_t t = 0;
  double cum_regret = 0.0;
};

struct RegretTrace {
  int run_id = 0;
  std::string experiment;
  std::string mechanism;  // label, includes the rho_min target in sweeps
  int d = 0;
  int K = 0;
  std::int64_t n = 0;
  double eps = 0.0;
  double delta = 0.0;
  double gap = 0.0;
  std::uint64_t seed = 0;
  std::vector<Checkpoint> checkpoints;
  std::vector<std::pair<std::string, double>> metadata;
  double wall_time_s = 0.0;
  std::optional<std::string> error;

  double FinalRegret() const {
    return checkpoints.empty() ? 0.0 : checkpoints.back().cum_regret;
  }
};

// About `count` distinct, log-spaced rounds in [1, n], always ending at n.
std::vector<std::int64_t> LogSpacedCheckpoints(std::int64_t n, int count);

std::vector<CellSpec> ExpandGrid(const RunConfig& cfg);

// Runs one cell to completion. Mechanism failures are recorded in
// RegretTrace::error rather than thrown.
RegretTrace RunCell(const CellSpec& cell,
                    const std::vector<std::int64_t>& checkpoints);

// Runs every cell of the grid, `cfg.threads` at a time. Output order follows
// run_id regardless of scheduling.
std::vector<RegretTrace> RunExperiment(const RunConfig& cfg);

// Mean cumulative regret per checkpoint over traces sharing a checkpoint grid.
// The result does not depend on the order of `traces`.
std::vector<Checkpoint> MeanCurve(const std::vector<const RegretTrace*>& traces);

// Ordinary least-squares slope of log(regret) against log(d).
// Throws kInvalidArgument for fewer than 3 points or non-positive values and
// kDegenerateFit if every d is equal.
double FitLogLogSlope(const std::vector<std::pair<double, double>>& points);

inline constexpr std::string_view kCsvHeader =
    "run_id,experiment,mechanism,d,K,n,eps,delta,gap,seed,t,cum_regret";

void WriteCsv(const std::vector<RegretTrace>& traces, std::ostream& os);
// Throws kIoError naming the path on failure.
void WriteCsv(const std::vector<RegretTrace>& traces, const std::string& path);

struct CsvRow {
  int run_id = 0;
  std::string experiment;
  std::string mechanism;
  int d = 0;
  int K = 0;
  std::int64_t n = 0;
  double eps = 0.0;
  double delta = 0.0;
  double gap = 0.0;
  std::uint64_t seed = 0;
  std::int64_t t = 0;
  double cum_regret = 0.0;
};

std::vector<CsvRow> ReadCsv(std::istream& is);
std::vector<CsvRow> ReadCsv(const std::string& path);

// key=value lines describing a trace (parameters, wall time, error).
void WriteMetadata(const RegretTrace& trace, std::ostream& os);

}  // namespace privlinucb

#endif  // PRIVLINUCB_HARNESS_H_
