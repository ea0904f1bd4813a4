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

#include "privlinucb/simulation.h"

#include <string>
#include <utility>

#include "privlinucb/errors.h"

namespace privlinucb {
namespace {

TreeOptions OptionsFor(const NoiseMechanism& mech, const BanditParams& params) {
  TreeOptions options;
  // Clipping only matters for the privacy guarantee.
  if (mech.is_private()) options.row_norm_bound = params.Ltilde;
  return options;
}

}  // namespace

RoundRecord RunRound(std::int64_t t, const DecisionSet& decisions,
                     Environment& env, PrivateGramTree& tree,
                     const NoiseMechanism& mech, const BanditParams& params,
                     RoundDiagnostics* diagnostics) {
  if (t > params.n) {
    throw Error(ErrorCode::kQueryBeyondHorizon,
                "round " + std::to_string(t) + " past the horizon");
  }
  const int d = params.d;
  Eigen::MatrixXd noisy = tree.QueryAugmented(t);

  PrivatizedState state;
  state.t = t;
  state.V = noisy.topLeftCorner(d, d);
  state.V.diagonal().array() += mech.shift();
  state.u_tilde = noisy.col(d).head(d);

  ConfidenceEllipsoid ell = BuildEllipsoid(state, mech.bounds(), params);
  const Selection pick = SelectAction(decisions, ell, params.L);

  RoundRecord record;
  record.t = t;
  record.action_index = pick.index;
  record.action = decisions.action(pick.index);
  record.beta = ell.beta;
  record.reward = env.Reward(record.action);
  tree.Insert(t, AugmentedRow{record.action, record.reward});
  record.regret = env.Regret(decisions, pick.index);

  if (diagnostics != nullptr) {
    diagnostics->log_det_v = ell.factor.LogDet();
    diagnostics->theta_tilde = std::move(ell.center);
    diagnostics->state = std::move(state);
  }
  return record;
}

Simulation::Simulation(const SimulationSpec& spec)
    : spec_(spec),
      mech_(NoiseMechanism::Create(spec.mechanism, spec.params)),
      env_(spec.env, spec.seed),
      tree_(spec.params.n, spec.params.d, mech_.MakeNodeSampler(), spec.seed,
            OptionsFor(mech_, spec.params)) {
  if (spec.env.d != spec.params.d) {
    throw Error(ErrorCode::kInvalidArgument,
                "environment and policy dimensions differ");
  }
}

RoundRecord Simulation::Step(RoundDiagnostics* diagnostics) {
  if (done()) {
    throw Error(ErrorCode::kQueryBeyondHorizon, "simulation already finished");
  }
  ++t_;
  const DecisionSet decisions = env_.NextDecisionSet();
  return RunRound(t_, decisions, env_, tree_, mech_, spec_.params, diagnostics);
}

}  // namespace privlinucb
