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

#ifndef PRIVLINUCB_ENVIRONMENT_H_
#define PRIVLINUCB_ENVIRONMENT_H_

#include <Eigen/Core>
#include <cstdint>
#include <optional>

#include "privlinucb/rng.h"
#include "privlinucb/types.h"

namespace privlinucb {

enum class RewardModel {
  kPlusMinusOne,   // y in {-1, +1} with E[y] = <x, theta*>
  kGaussianNoise,  // y = <x, theta*> + N(0, sigma^2)
};

struct EnvConfig {
  int d = 5;
  int K = 0;  // 0 means d^2
  // Forced gap between the optimal and every suboptimal mean reward; nullopt
  // draws suboptimal means from the full [-0.75, 0.75] range.
  std::optional<double> gap = 0.1;
  RewardModel reward_model = RewardModel::kPlusMinusOne;
  double reward_sigma = 1.0;
  double optimal_dot = 0.75;
  double suboptimal_low = -0.75;

  int NumActions() const { return K > 0 ? K : d * d; }
  double SuboptimalHigh() const {
    return gap ? optimal_dot - *gap : optimal_dot;
  }
  void Validate() const;
};

struct HiddenParameter {
  Eigen::VectorXd theta_star;
};

// Uniform on the unit sphere in R^d (d >= 2).
HiddenParameter GenThetaStar(int d, Rng& rng);

// One optimal action with <x, theta*> = optimal_dot and K-1 suboptimal actions
// with <x, theta*> uniform on [suboptimal_low, SuboptimalHigh()], all of unit
// norm and uniform on their sphere slice. The optimal action sits at a
// uniformly random index. Requires d >= 3.
DecisionSet GenDecisionSet(const HiddenParameter& hidden, const EnvConfig& cfg,
                           Rng& rng);

// Throws kDomainError if |<x, theta*>| > 1 + 1e-9 under the +-1 model.
double DrawReward(const Eigen::VectorXd& x, const HiddenParameter& hidden,
                  const EnvConfig& cfg, Rng& rng);

// max_{x in D} <theta*, x> - <theta*, x_chosen>.
double PseudoRegretIncrement(const DecisionSet& decisions, Eigen::Index chosen,
                             const HiddenParameter& hidden);

// A seeded environment instance. theta*, the decision sets and the rewards
// each draw from their own sub-stream of `seed`.
class Environment {
 public:
  Environment(const EnvConfig& cfg, std::uint64_t seed);

  const EnvConfig& config() const { return cfg_; }
  DecisionSet NextDecisionSet() { return GenDecisionSet(hidden_, cfg_, decision_rng_); }
  double Reward(const Eigen::VectorXd& x) {
    return DrawReward(x, hidden_, cfg_, reward_rng_);
  }
  // Measurement only; the policy never sees theta*.
  double Regret(const DecisionSet& decisions, Eigen::Index chosen) const {
    return PseudoRegretIncrement(decisions, chosen, hidden_);
  }
  const HiddenParameter& hidden() const { return hidden_; }

 private:
  EnvConfig cfg_;
  HiddenParameter hidden_;
  Rng decision_rng_;
  Rng reward_rng_;
};

}  // namespace privlinucb

#endif  // PRIVLINUCB_ENVIRONMENT_H_
