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

#include "privlinucb/linucb.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "privlinucb/errors.h"

namespace privlinucb {

void BanditParams::Validate() const {
  if (d < 1) throw Error(ErrorCode::kInvalidArgument, "d must be positive");
  if (n < 0) throw Error(ErrorCode::kInvalidArgument, "n must be nonnegative");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha must lie in (0, 1)");
  }
  if (!(L > 0.0) || !(S > 0.0) || !(sigma >= 0.0) || !(Ltilde > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "L, S, Ltilde must be positive and sigma nonnegative");
  }
  if (!(B >= 1.0)) throw Error(ErrorCode::kInvalidArgument, "B must be >= 1");
}

SpdFactor::SpdFactor(const Eigen::MatrixXd& v) : v_(v) {
  if (v.rows() != v.cols() || v.rows() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "V must be square and nonempty");
  }
  const double asym = (v - v.transpose()).norm();
  if (!(asym <= 1e-9 * v.norm())) {
    throw Error(ErrorCode::kDomainError,
                "V is not symmetric (||V - V^T||_F = " + std::to_string(asym) +
                    ")");
  }
  llt_.compute(v);
  if (llt_.info() != Eigen::Success) {
    throw Error(ErrorCode::kNotPositiveDefinite,
                "Cholesky factorization of V failed");
  }
  const auto diag = llt_.matrixLLT().diagonal();
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (!(diag(i) > 0.0) || !std::isfinite(diag(i))) {
      throw Error(ErrorCode::kNotPositiveDefinite,
                  "V has a non-positive pivot");
    }
    log_det_ += 2.0 * std::log(diag(i));
  }
}

double SpdFactor::InverseNorm(const Eigen::VectorXd& x) const {
  return llt_.matrixL().solve(x).norm();
}

Eigen::VectorXd SpdFactor::InverseNorms(const Eigen::MatrixXd& points) const {
  if (points.cols() <= points.rows()) {
    Eigen::MatrixXd whitened = llt_.matrixL().solve(points);
    return whitened.colwise().norm().transpose();
  }
  // Many points: one small inverse, then a matrix product, which is much
  // faster than a triangular solve against a wide right-hand side.
  Eigen::MatrixXd l_inv = Eigen::MatrixXd::Identity(dim(), dim());
  llt_.matrixL().solveInPlace(l_inv);
  Eigen::MatrixXd whitened(dim(), points.cols());
  whitened.noalias() = l_inv.triangularView<Eigen::Lower>() * points;
  return whitened.colwise().norm().transpose();
}

double ConfidenceEllipsoid::Distance(const Eigen::VectorXd& theta) const {
  const Eigen::VectorXd diff = theta - center;
  return std::sqrt(std::max(0.0, diff.dot(V() * diff)));
}

Eigen::VectorXd ComputeRegressor(const SpdFactor& factor,
                                 const Eigen::VectorXd& u_tilde) {
  if (u_tilde.size() != factor.dim()) {
    throw Error(ErrorCode::kInvalidArgument, "u~ dimension mismatch");
  }
  return factor.Solve(u_tilde);
}

Eigen::VectorXd ComputeRegressor(const PrivatizedState& state) {
  return ComputeRegressor(SpdFactor(state.V), state.u_tilde);
}

double ComputeBeta(std::int64_t t, double log_det_v,
                   const AccurateBounds& bounds, const BanditParams& params) {
  bounds.Validate();
  double radicand = 2.0 * std::log(2.0 / params.alpha) + log_det_v -
                    params.d * std::log(bounds.rho_min);
  if (radicand < 0.0) {
    if (radicand < -1e-6) {
      throw Error(ErrorCode::kDomainError,
                  "negative confidence radicand " + std::to_string(radicand) +
                      " at round " + std::to_string(t));
    }
    radicand = 0.0;
  }
  return params.sigma * std::sqrt(radicand) +
         params.S * std::sqrt(bounds.rho_max) + bounds.gamma;
}

ConfidenceEllipsoid BuildEllipsoid(const PrivatizedState& state,
                                   const AccurateBounds& bounds,
                                   const BanditParams& params) {
  SpdFactor factor(state.V);
  Eigen::VectorXd center = ComputeRegressor(factor, state.u_tilde);
  const double beta = ComputeBeta(state.t, factor.LogDet(), bounds, params);
  return ConfidenceEllipsoid{std::move(center), std::move(factor), beta};
}

Eigen::VectorXd UcbScores(const DecisionSet& decisions,
                          const ConfidenceEllipsoid& ell) {
  if (decisions.dim() != ell.center.size()) {
    throw Error(ErrorCode::kInvalidArgument, "action dimension mismatch");
  }
  Eigen::VectorXd scores = decisions.actions.transpose() * ell.center;
  if (ell.beta != 0.0) {
    scores += ell.beta * ell.factor.InverseNorms(decisions.actions);
  }
  return scores;
}

Selection SelectAction(const DecisionSet& decisions,
                       const ConfidenceEllipsoid& ell,
                       double action_norm_bound) {
  if (decisions.size() == 0) {
    throw Error(ErrorCode::kEmptyDecisionSet, "no actions offered");
  }
  if (std::isfinite(action_norm_bound)) {
    const double limit = action_norm_bound + 1e-9;
    for (Eigen::Index i = 0; i < decisions.size(); ++i) {
      if (decisions.action(i).norm() > limit) {
        throw Error(ErrorCode::kInvalidArgument,
                    "action " + std::to_string(i) + " exceeds the norm bound");
      }
    }
  }
  const Eigen::VectorXd scores = UcbScores(decisions, ell);
  Selection best{0, scores(0)};
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    if (std::isnan(scores(i))) {
      throw Error(ErrorCode::kDomainError, "NaN UCB score");
    }
    if (scores(i) > best.score) best = Selection{i, scores(i)};
  }
  return best;
}

double EvaluateRegretBound(const BanditParams& params,
                           const AccurateBounds& bounds,
                           std::optional<double> gap) {
  bounds.Validate();
  if (gap && !(*gap > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "gap must be positive");
  }
  const double n = static_cast<double>(params.n);
  const double d = params.d;
  const double growth = n * params.L * params.L / (d * bounds.rho_min);
  const double bracket =
      params.sigma * (2.0 * std::log(2.0 / params.alpha) +
                      d * std::log(bounds.rho_max / bounds.rho_min + growth)) +
      (params.S * std::sqrt(bounds.rho_max) + bounds.gamma) *
          std::sqrt(d * std::log(1.0 + growth));
  if (gap) return 8.0 * params.B / *gap * bracket * bracket;
  return params.B * std::sqrt(8.0 * n) * bracket;
}

}  // namespace privlinucb
