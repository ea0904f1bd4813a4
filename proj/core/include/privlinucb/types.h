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

#ifndef PRIVLINUCB_TYPES_H_
#define PRIVLINUCB_TYPES_H_

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <string_view>

namespace privlinucb {

// The actions offered in one round, stored column-wise (d x K).
struct DecisionSet {
  Eigen::MatrixXd actions;

  Eigen::Index size() const { return actions.cols(); }
  Eigen::Index dim() const { return actions.rows(); }
  auto action(Eigen::Index i) const { return actions.col(i); }
};

// High-probability bounds on the regularizer H_t and the perturbation h_t:
//   ||H_t|| <= rho_max, ||H_t^{-1}|| <= 1 / rho_min, ||h_t||_{H_t^{-1}} <= gamma.
struct AccurateBounds {
  double rho_min = 1.0;
  double rho_max = 1.0;
  double gamma = 0.0;

  void Validate() const;
};

enum class MechanismKind {
  kNonPrivate,
  kWishartShifted,
  kWishartUnshifted,
  kGaussianShifted,
};

std::string_view MechanismName(MechanismKind kind);
// Accepts the names produced by MechanismName ("nonprivate", "wishart",
// "wishart-unshifted", "gaussian"). Throws kInvalidArgument otherwise.
MechanismKind ParseMechanism(std::string_view name);

}  // namespace privlinucb

#endif  // PRIVLINUCB_TYPES_H_
