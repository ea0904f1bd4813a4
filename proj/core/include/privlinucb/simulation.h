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

#ifndef PRIVLINUCB_SIMULATION_H_
#define PRIVLINUCB_SIMULATION_H_

#include <Eigen/Core>
#include <cstdint>
#include <memory>

#include "privlinucb/environment.h"
#include "privlinucb/gram_tree.h"
#include "privlinucb/linucb.h"
#include "privlinucb/noise.h"

namespace privlinucb {

struct RoundRecord {
  std::int64_t t = 0;
  Eigen::Index action_index = 0;
  Eigen::VectorXd action;
  double reward = 0.0;
  double beta = 0.0;
  double regret = 0.0;  // instantaneous pseudo-regret
};

// Optional view into what the policy saw in a round.
struct RoundDiagnostics {
  PrivatizedState state;
  Eigen::VectorXd theta_tilde;
  double log_det_v = 0.0;
};

// One round of optimistic play on privatized statistics: query the tree for
// round t, form V_t and u~_t, compute theta~_t and beta_t, choose an action,
// observe its reward and insert [x; y] into the tree.
RoundRecord RunRound(std::int64_t t, const DecisionSet& decisions,
                     Environment& env, PrivateGramTree& tree,
                     const NoiseMechanism& mech, const BanditParams& params,
                     RoundDiagnostics* diagnostics = nullptr);

struct SimulationSpec {
  EnvConfig env;
  MechanismSpec mechanism;
  BanditParams params;
  std::uint64_t seed = 1;
};

// A single run: environment, tree and mechanism owned together.
class Simulation {
 public:
  explicit Simulation(const SimulationSpec& spec);

  // Plays the next round. Throws once the horizon is exhausted.
  RoundRecord Step(RoundDiagnostics* diagnostics = nullptr);

  std::int64_t round() const { return t_; }
  bool done() const { return t_ >= spec_.params.n; }
  const NoiseMechanism& mechanism() const { return mech_; }
  const PrivateGramTree& tree() const { return tree_; }
  const Environment& environment() const { return env_; }

 private:
  SimulationSpec spec_;
  NoiseMechanism mech_;
  Environment env_;
  PrivateGramTree tree_;
  std::int64_t t_ = 0;
};

}  // namespace privlinucb

#endif  // PRIVLINUCB_SIMULATION_H_
