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

#ifndef PRIVLINUCB_LINUCB_H_
#define PRIVLINUCB_LINUCB_H_

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>

#include "privlinucb/types.h"

namespace privlinucb {

// Problem constants shared by the confidence width and the regret bounds.
struct BanditParams {
  int d = 1;
  std::int64_t n = 1;
  double alpha = 0.05;
  double L = 1.0;       // ||x|| <= L for every offered action
  double B = 1.0;       // |<theta*, x>| <= B, B >= 1
  double S = 1.0;       // ||theta*|| <= S
  double sigma = 1.0;   // subgaussian scale of the reward noise
  double Ltilde = std::sqrt(2.0);  // ||x||^2 + y^2 <= Ltilde^2

  void Validate() const;
};

// What the policy receives each round: V_t = G_t + H_t and u~_t = u_t + h_t.
struct PrivatizedState {
  Eigen::MatrixXd V;
  Eigen::VectorXd u_tilde;
  std::int64_t t = 1;
};

// Cholesky factorization V = L L^T. The log-determinant is accumulated from
// the factor diagonal so it stays finite for large Gram matrices.
class SpdFactor {
 public:
  // Throws kNotPositiveDefinite if V is not numerically SPD, kDomainError if
  // V is not symmetric to 1e-9 (relative, Frobenius).
  explicit SpdFactor(const Eigen::MatrixXd& v);

  Eigen::Index dim() const { return llt_.rows(); }
  double LogDet() const { return log_det_; }
  Eigen::VectorXd Solve(const Eigen::VectorXd& b) const { return llt_.solve(b); }
  // ||x||_{V^{-1}}.
  double InverseNorm(const Eigen::VectorXd& x) const;
  // ||x||_{V^{-1}} for each column of `points`.
  Eigen::VectorXd InverseNorms(const Eigen::MatrixXd& points) const;
  const Eigen::MatrixXd& matrix() const { return v_; }

 private:
  Eigen::MatrixXd v_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double log_det_ = 0.0;
};

struct ConfidenceEllipsoid {
  Eigen::VectorXd center;  // theta~_t
  SpdFactor factor;        // of V_t
  double beta = 0.0;

  const Eigen::MatrixXd& V() const { return factor.matrix(); }
  // ||theta - center||_V.
  double Distance(const Eigen::VectorXd& theta) const;
};

// theta~ = V^{-1} u~ via the SPD factorization.
Eigen::VectorXd ComputeRegressor(const PrivatizedState& state);
Eigen::VectorXd ComputeRegressor(const SpdFactor& factor,
                                 const Eigen::VectorXd& u_tilde);

// Confidence width
//   beta_t = sigma sqrt(2 log(2/alpha) + log det V_t - d log rho_min)
//            + S sqrt(rho_max) + gamma.
// Values under the root in [-1e-6, 0) are clamped to zero; anything more
// negative is a kDomainError.
double ComputeBeta(std::int64_t t, double log_det_v,
                   const AccurateBounds& bounds, const BanditParams& params);

ConfidenceEllipsoid BuildEllipsoid(const PrivatizedState& state,
                                   const AccurateBounds& bounds,
                                   const BanditParams& params);

struct Selection {
  Eigen::Index index = 0;
  double score = 0.0;
};

// UCB scores <theta~, x> + beta ||x||_{V^{-1}} for every action.
Eigen::VectorXd UcbScores(const DecisionSet& decisions,
                          const ConfidenceEllipsoid& ell);

// Arg max of the UCB score; ties go to the lowest index. When
// `action_norm_bound` is finite every action must satisfy ||x|| <= bound + 1e-9.
Selection SelectAction(const DecisionSet& decisions,
                       const ConfidenceEllipsoid& ell,
                       double action_norm_bound =
                           std::numeric_limits<double>::infinity());

// Right-hand side of the high-probability pseudo-regret bound. Without a gap
// this is the sqrt(n) bound; with a gap Delta it is the 1/Delta bound.
double EvaluateRegretBound(const BanditParams& params,
                           const AccurateBounds& bounds,
                           std::optional<double> gap = std::nullopt);

}  // namespace privlinucb

#endif  // PRIVLINUCB_LINUCB_H_
