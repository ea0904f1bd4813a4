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

#include "privlinucb/harness.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <thread>

#include "privlinucb/errors.h"

namespace privlinucb {
namespace {

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string MechanismLabel(const MechanismSpec& spec) {
  std::string label(MechanismName(spec.kind));
  if (spec.rho_min_override) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), ":rho_min=%.6g", *spec.rho_min_override);
    label += buf;
  }
  return label;
}

SimulationSpec MakeSpec(const RunConfig& cfg, int d, MechanismKind kind,
                        std::optional<double> gap, std::uint64_t seed) {
  SimulationSpec spec;
  spec.env.d = d;
  spec.env.K = cfg.K;
  spec.env.gap = gap;
  spec.env.reward_model = cfg.reward_model;
  spec.env.reward_sigma = cfg.reward_sigma;
  spec.mechanism.kind = kind;
  spec.mechanism.eps = cfg.eps;
  spec.mechanism.delta = cfg.delta;
  spec.mechanism.rho = cfg.rho;
  spec.params.d = d;
  spec.params.n = cfg.n;
  spec.params.alpha = cfg.Alpha();
  spec.params.sigma = cfg.reward_model == RewardModel::kPlusMinusOne
                          ? 1.0
                          : cfg.reward_sigma;
  spec.seed = seed;
  return spec;
}

std::int64_t ParseInt(const std::string& s, const char* field) {
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0') {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("bad integer in CSV field ") + field + ": " + s);
  }
  return v;
}

double ParseDouble(const std::string& s, const char* field) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("bad number in CSV field ") + field + ": " + s);
  }
  return v;
}

}  // namespace

std::string_view ExperimentName(Experiment e) {
  switch (e) {
    case Experiment::kSingle:
      return "single";
    case Experiment::kExp1RegretVsDim:
      return "exp1";
    case Experiment::kExp2VariantComparison:
      return "exp2";
    case Experiment::kExp3ShiftSweep:
      return "exp3";
  }
  return "unknown";
}

Experiment ParseExperiment(std::string_view name) {
  for (Experiment e :
       {Experiment::kSingle, Experiment::kExp1RegretVsDim,
        Experiment::kExp2VariantComparison, Experiment::kExp3ShiftSweep}) {
    if (ExperimentName(e) == name) return e;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown experiment '" + std::string(name) + "'");
}

std::vector<double> RunConfig::DefaultRhoMinMultipliers() {
  // 7 log-spaced points over [1/16, 16].
  std::vector<double> out;
  for (int i = -3; i <= 3; ++i) out.push_back(std::pow(2.0, 4.0 * i / 3.0));
  return out;
}

void RunConfig::Validate() const {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorCode::kInvalidArgument, msg);
  };
  if (n < 1) fail("n must be >= 1");
  if (d < 3) fail("d must be >= 3");
  if (K < 0) fail("K must be >= 0");
  if (repeats < 1) fail("repeats must be >= 1");
  if (checkpoints < 1) fail("checkpoints must be >= 1");
  if (threads < 1) fail("threads must be >= 1");
  if (!(eps > 0.0)) fail("eps must be positive");
  if (!(delta > 0.0 && delta < 1.0)) fail("delta must lie in (0, 1)");
  if (!(rho > 0.0)) fail("rho must be positive");
  if (gap && !(*gap >= 0.0)) fail("gap must be nonnegative");
  if (reward_model == RewardModel::kGaussianNoise && !(reward_sigma >= 0.0)) {
    fail("reward sigma must be >= 0");
  }
  const double a = Alpha();
  if (!(a > 0.0 && a < 1.0)) fail("alpha must lie in (0, 1)");
  if (experiment == Experiment::kExp1RegretVsDim) {
    if (dims.empty()) fail("dimension grid is empty");
    for (int v : dims) {
      if (v < 3) fail("every grid dimension must be >= 3");
    }
  }
  if (experiment == Experiment::kExp3ShiftSweep) {
    if (rho_min_multipliers.empty()) fail("rho_min grid is empty");
    for (double v : rho_min_multipliers) {
      if (!(v > 0.0)) fail("rho_min multipliers must be positive");
    }
  }
}

std::vector<std::int64_t> LogSpacedCheckpoints(std::int64_t n, int count) {
  std::set<std::int64_t> points;
  if (count <= 1 || n <= 1) {
    points.insert(std::max<std::int64_t>(n, 1));
  } else {
    const double log_n = std::log(static_cast<double>(n));
    for (int i = 0; i < count; ++i) {
      const double v = std::exp(log_n * i / (count - 1));
      points.insert(std::clamp<std::int64_t>(std::llround(v), 1, n));
    }
    points.insert(n);
  }
  return {points.begin(), points.end()};
}

std::vector<CellSpec> ExpandGrid(const RunConfig& cfg) {
  cfg.Validate();
  std::vector<CellSpec> cells;
  auto add = [&](SimulationSpec sim) {
    CellSpec cell;
    cell.run_id = static_cast<int>(cells.size());
    cell.experiment = cfg.experiment;
    cell.sim = std::move(sim);
    cells.push_back(std::move(cell));
  };
  const std::optional<double> kNoGap;
  const std::optional<double> kForcedGap = 0.1;

  switch (cfg.experiment) {
    case Experiment::kSingle:
      for (int r = 0; r < cfg.repeats; ++r) {
        add(MakeSpec(cfg, cfg.d, cfg.mechanism, cfg.gap, cfg.seed + r));
      }
      break;
    case Experiment::kExp1RegretVsDim:
      for (int d : cfg.dims) {
        for (int r = 0; r < cfg.repeats; ++r) {
          RunConfig per_dim = cfg;
          per_dim.K = d * d;
          add(MakeSpec(per_dim, d, MechanismKind::kNonPrivate, cfg.gap,
                       cfg.seed + r));
        }
      }
      break;
    case Experiment::kExp2VariantComparison:
      for (const auto& gap : {kNoGap, kForcedGap}) {
        for (MechanismKind kind :
             {MechanismKind::kNonPrivate, MechanismKind::kGaussianShifted,
              MechanismKind::kWishartShifted,
              MechanismKind::kWishartUnshifted}) {
          for (int r = 0; r < cfg.repeats; ++r) {
            add(MakeSpec(cfg, cfg.d, kind, gap, cfg.seed + r));
          }
        }
      }
      break;
    case Experiment::kExp3ShiftSweep:
      for (const auto& gap : {kNoGap, kForcedGap}) {
        for (MechanismKind kind : {MechanismKind::kGaussianShifted,
                                   MechanismKind::kWishartShifted}) {
          // The default rho_min depends only on the mechanism, not the seed.
          double base_rho_min = 0.0;
          SimulationSpec probe = MakeSpec(cfg, cfg.d, kind, gap, cfg.seed);
          try {
            base_rho_min =
                NoiseMechanism::Create(probe.mechanism, probe.params)
                    .bounds()
                    .rho_min;
          } catch (const Error&) {
            // Leave the override unset; RunCell will record the failure.
          }
          for (double mult : cfg.rho_min_multipliers) {
            for (int r = 0; r < cfg.repeats; ++r) {
              SimulationSpec sim = MakeSpec(cfg, cfg.d, kind, gap, cfg.seed + r);
              if (base_rho_min > 0.0) {
                sim.mechanism.rho_min_override = mult * base_rho_min;
              }
              add(std::move(sim));
            }
          }
        }
      }
      break;
  }
  return cells;
}

RegretTrace RunCell(const CellSpec& cell,
                    const std::vector<std::int64_t>& checkpoints) {
  const SimulationSpec& sim_spec = cell.sim;
  RegretTrace trace;
  trace.run_id = cell.run_id;
  trace.experiment = std::string(ExperimentName(cell.experiment));
  trace.mechanism = MechanismLabel(sim_spec.mechanism);
  trace.d = sim_spec.params.d;
  trace.K = sim_spec.env.NumActions();
  trace.n = sim_spec.params.n;
  const bool is_private = sim_spec.mechanism.kind != MechanismKind::kNonPrivate;
  trace.eps = is_private ? sim_spec.mechanism.eps
                         : std::numeric_limits<double>::infinity();
  trace.delta = is_private ? sim_spec.mechanism.delta : 0.0;
  trace.gap = sim_spec.env.gap.value_or(0.0);
  trace.seed = sim_spec.seed;

  const auto start = std::chrono::steady_clock::now();
  try {
    Simulation sim(sim_spec);
    trace.metadata = sim.mechanism().Describe();
    trace.metadata.emplace_back("alpha", sim_spec.params.alpha);
    double cum = 0.0;
    auto next = checkpoints.begin();
    while (!sim.done()) {
      const RoundRecord rec = sim.Step();
      cum += rec.regret;
      while (next != checkpoints.end() && *next == rec.t) {
        trace.checkpoints.push_back({rec.t, cum});
        ++next;
      }
    }
    const int clipped = sim.tree().clipped_rows();
    if (clipped > 0) trace.metadata.emplace_back("clipped_rows", clipped);
  } catch (const Error& e) {
    trace.error = e.what();
    trace.checkpoints.clear();
  }
  trace.wall_time_s = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  return trace;
}

std::vector<RegretTrace> RunExperiment(const RunConfig& cfg) {
  const std::vector<CellSpec> cells = ExpandGrid(cfg);
  const std::vector<std::int64_t> checkpoints =
      LogSpacedCheckpoints(cfg.n, cfg.checkpoints);
  std::vector<RegretTrace> traces(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      traces[i] = RunCell(cells[i], checkpoints);
    }
  };
  const int workers =
      std::min<int>(cfg.threads, static_cast<int>(cells.size()));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return traces;
}

std::vector<Checkpoint> MeanCurve(
    const std::vector<const RegretTrace*>& traces) {
  std::vector<Checkpoint> mean;
  if (traces.empty()) return mean;
  const std::size_t len = traces.front()->checkpoints.size();
  for (const RegretTrace* tr : traces) {
    if (tr->checkpoints.size() != len) {
      throw Error(ErrorCode::kInvalidArgument,
                  "traces have different checkpoint grids");
    }
  }
  std::vector<double> column(traces.size());
  for (std::size_t j = 0; j < len; ++j) {
    for (std::size_t i = 0; i < traces.size(); ++i) {
      if (traces[i]->checkpoints[j].t != traces.front()->checkpoints[j].t) {
        throw Error(ErrorCode::kInvalidArgument,
                    "traces have different checkpoint grids");
      }
      column[i] = traces[i]->checkpoints[j].cum_regret;
    }
    // Sorting first makes the floating-point sum independent of run order.
    std::sort(column.begin(), column.end());
    double sum = 0.0;
    for (double v : column) sum += v;
    mean.push_back({traces.front()->checkpoints[j].t,
                    sum / static_cast<double>(column.size())});
  }
  return mean;
}

double FitLogLogSlope(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) {
    throw Error(ErrorCode::kInvalidArgument, "slope fit needs >= 3 points");
  }
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (const auto& [d, regret] : points) {
    if (!(d > 0.0) || !(regret > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "slope fit needs positive coordinates");
    }
    mean_x += std::log(d);
    mean_y += std::log(regret);
  }
  mean_x /= static_cast<double>(points.size());
  mean_y /= static_cast<double>(points.size());
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& [d, regret] : points) {
    const double dx = std::log(d) - mean_x;
    sxx += dx * dx;
    sxy += dx * (std::log(regret) - mean_y);
  }
  if (sxx == 0.0) {
    throw Error(ErrorCode::kDegenerateFit, "all dimensions are equal");
  }
  return sxy / sxx;
}

void WriteCsv(const std::vector<RegretTrace>& traces, std::ostream& os) {
  os << kCsvHeader << '\n';
  for (const RegretTrace& tr : traces) {
    const std::string prefix =
        std::to_string(tr.run_id) + ',' + tr.experiment + ',' + tr.mechanism +
        ',' + std::to_string(tr.d) + ',' + std::to_string(tr.K) + ',' +
        std::to_string(tr.n) + ',' + FormatDouble(tr.eps) + ',' +
        FormatDouble(tr.delta) + ',' + FormatDouble(tr.gap) + ',' +
        std::to_string(tr.seed) + ',';
    if (tr.error) {
      // A failed cell leaves a single marker row.
      os << prefix << "0,nan\n";
      continue;
    }
    for (const Checkpoint& cp : tr.checkpoints) {
      os << prefix << cp.t << ',' << FormatDouble(cp.cum_regret) << '\n';
    }
  }
}

void WriteCsv(const std::vector<RegretTrace>& traces, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIoError, "cannot open '" + path + "' for writing");
  }
  WriteCsv(traces, out);
  out.flush();
  if (!out) throw Error(ErrorCode::kIoError, "write to '" + path + "' failed");
}

std::vector<CsvRow> ReadCsv(std::istream& is) {
  std::vector<CsvRow> rows;
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) {
    throw Error(ErrorCode::kInvalidArgument, "missing or unexpected CSV header");
  }
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 12) {
      throw Error(ErrorCode::kInvalidArgument, "CSV row has " +
                                                   std::to_string(f.size()) +
                                                   " fields: " + line);
    }
    CsvRow row;
    row.run_id = static_cast<int>(ParseInt(f[0], "run_id"));
    row.experiment = f[1];
    row.mechanism = f[2];
    row.d = static_cast<int>(ParseInt(f[3], "d"));
    row.K = static_cast<int>(ParseInt(f[4], "K"));
    row.n = ParseInt(f[5], "n");
    row.eps = ParseDouble(f[6], "eps");
    row.delta = ParseDouble(f[7], "delta");
    row.gap = ParseDouble(f[8], "gap");
    row.seed = std::strtoull(f[9].c_str(), nullptr, 10);
    row.t = ParseInt(f[10], "t");
    row.cum_regret = ParseDouble(f[11], "cum_regret");
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<CsvRow> ReadCsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open '" + path + "'");
  return ReadCsv(in);
}

void WriteMetadata(const RegretTrace& trace, std::ostream& os) {
  os << "run_id=" << trace.run_id << " experiment=" << trace.experiment
     << " mechanism=" << trace.mechanism << " d=" << trace.d
     << " K=" << trace.K << " n=" << trace.n << " seed=" << trace.seed;
  for (const auto& [key, value] : trace.metadata) {
    os << ' ' << key << '=' << FormatDouble(value);
  }
  os << " final_regret=" << FormatDouble(trace.FinalRegret())
     << " wall_time_s=" << FormatDouble(trace.wall_time_s);
  if (trace.error) os << " error=\"" << *trace.error << '"';
  os << '\n';
}

}  // namespace privlinucb
