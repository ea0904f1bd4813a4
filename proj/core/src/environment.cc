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

#include "privlinucb/environment.h"

#include <cmath>
#include <random>
#include <string>

#include "privlinucb/errors.h"

namespace privlinucb {
namespace {

Eigen::VectorXd StandardNormalVector(int d, Rng& rng) {
  NormalDistribution normal(0.0, 1.0);
  Eigen::VectorXd g(d);
  for (int i = 0; i < d; ++i) g(i) = normal(rng);
  return g;
}

}  // namespace

void EnvConfig::Validate() const {
  if (d < 3) {
    throw Error(ErrorCode::kInvalidArgument,
                "decision sets need d >= 3, got " + std::to_string(d));
  }
  if (NumActions() < 1) {
    throw Error(ErrorCode::kInvalidArgument, "need at least one action");
  }
  if (gap && !(*gap >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "gap must be nonnegative");
  }
  if (!(optimal_dot > -1.0 && optimal_dot < 1.0) ||
      !(suboptimal_low >= -1.0 && suboptimal_low <= SuboptimalHigh())) {
    throw Error(ErrorCode::kInvalidArgument,
                "mean-reward interval must lie inside [-1, 1]");
  }
  if (reward_model == RewardModel::kGaussianNoise && !(reward_sigma >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "reward sigma must be >= 0");
  }
}

HiddenParameter GenThetaStar(int d, Rng& rng) {
  if (d < 2) throw Error(ErrorCode::kInvalidArgument, "theta* needs d >= 2");
  while (true) {
    Eigen::VectorXd g = StandardNormalVector(d, rng);
    const double norm = g.norm();
    if (norm > 0.0) return HiddenParameter{g / norm};
  }
}

DecisionSet GenDecisionSet(const HiddenParameter& hidden, const EnvConfig& cfg,
                           Rng& rng) {
  cfg.Validate();
  const Eigen::VectorXd& theta = hidden.theta_star;
  if (theta.size() != cfg.d) {
    throw Error(ErrorCode::kInvalidArgument, "theta* dimension mismatch");
  }
  const int k = cfg.NumActions();
  UniformIntDistribution pick(0, k - 1);
  const int optimal_index = pick(rng);
  UniformRealDistribution dot(cfg.suboptimal_low, cfg.SuboptimalHigh());
  Eigen::VectorXd dots(k);
  for (int i = 0; i < k; ++i) {
    dots(i) = i == optimal_index ? cfg.optimal_dot : dot(rng);
  }

  // Directions uniform on the unit sphere of theta*'s orthogonal complement:
  // project Gaussian vectors off theta* and normalize.
  NormalDistribution normal(0.0, 1.0);
  Eigen::MatrixXd w(cfg.d, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < cfg.d; ++j) w(j, i) = normal(rng);
  }
  w.noalias() -= theta * (theta.transpose() * w);
  for (int i = 0; i < k; ++i) {
    double norm = w.col(i).norm();
    while (!(norm > 1e-12)) {  // measure-zero event
      for (int j = 0; j < cfg.d; ++j) w(j, i) = normal(rng);
      w.col(i) -= w.col(i).dot(theta) * theta;
      norm = w.col(i).norm();
    }
    const double a = dots(i);
    w.col(i) *= std::sqrt(1.0 - a * a) / norm;
  }
  DecisionSet set{std::move(w)};
  set.actions.noalias() += theta * dots.transpose();
  return set;
}

double DrawReward(const Eigen::VectorXd& x, const HiddenParameter& hidden,
                  const EnvConfig& cfg, Rng& rng) {
  const double mean = x.dot(hidden.theta_star);
  switch (cfg.reward_model) {
    case RewardModel::kPlusMinusOne: {
      if (std::abs(mean) > 1.0 + 1e-9) {
        throw Error(ErrorCode::kDomainError,
                    "mean reward " + std::to_string(mean) +
                        " outside [-1, 1]");
      }
      UniformRealDistribution u(0.0, 1.0);
      return u(rng) < (1.0 + mean) / 2.0 ? 1.0 : -1.0;
    }
    case RewardModel::kGaussianNoise: {
      NormalDistribution noise(0.0, cfg.reward_sigma);
      return mean + noise(rng);
    }
  }
  return mean;
}

double PseudoRegretIncrement(const DecisionSet& decisions, Eigen::Index chosen,
                             const HiddenParameter& hidden) {
  if (chosen < 0 || chosen >= decisions.size()) {
    throw Error(ErrorCode::kInvalidArgument, "chosen action not in the set");
  }
  const Eigen::VectorXd means =
      decisions.actions.transpose() * hidden.theta_star;
  return std::max(0.0, means.maxCoeff() - means(chosen));
}

Environment::Environment(const EnvConfig& cfg, std::uint64_t seed)
    : cfg_(cfg),
      decision_rng_(MakeStream(seed, Stream::kDecisionSets)),
      reward_rng_(MakeStream(seed, Stream::kRewards)) {
  cfg_.Validate();
  Rng theta_rng = MakeStream(seed, Stream::kThetaStar);
  hidden_ = GenThetaStar(cfg_.d, theta_rng);
}

}  // namespace privlinucb
