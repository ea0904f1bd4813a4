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

#include "privlinucb/errors.h"

#include <cmath>
#include <string>

#include "privlinucb/types.h"

namespace privlinucb {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "InvalidArgument";
    case ErrorCode::kNotPositiveDefinite:
      return "NotPositiveDefinite";
    case ErrorCode::kDomainError:
      return "DomainError";
    case ErrorCode::kEmptyDecisionSet:
      return "EmptyDecisionSet";
    case ErrorCode::kOutOfOrderInsert:
      return "OutOfOrderInsert";
    case ErrorCode::kQueryBeyondHorizon:
      return "QueryBeyondHorizon";
    case ErrorCode::kStaleQuery:
      return "StaleQuery";
    case ErrorCode::kInvalidRegime:
      return "InvalidRegime";
    case ErrorCode::kDegenerateFit:
      return "DegenerateFit";
    case ErrorCode::kIoError:
      return "IoError";
  }
  return "Unknown";
}

void AccurateBounds::Validate() const {
  if (!(rho_min > 0.0) || !(rho_max >= rho_min) || !std::isfinite(rho_max)) {
    throw Error(ErrorCode::kInvalidArgument,
                "accurate bounds need 0 < rho_min <= rho_max < inf, got (" +
                    std::to_string(rho_min) + ", " + std::to_string(rho_max) +
                    ")");
  }
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::kInvalidArgument,
                "gamma must be finite and nonnegative");
  }
}

std::string_view MechanismName(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::kNonPrivate:
      return "nonprivate";
    case MechanismKind::kWishartShifted:
      return "wishart";
    case MechanismKind::kWishartUnshifted:
      return "wishart-unshifted";
    case MechanismKind::kGaussianShifted:
      return "gaussian";
  }
  return "unknown";
}

MechanismKind ParseMechanism(std::string_view name) {
  for (MechanismKind kind :
       {MechanismKind::kNonPrivate, MechanismKind::kWishartShifted,
        MechanismKind::kWishartUnshifted, MechanismKind::kGaussianShifted}) {
    if (MechanismName(kind) == name) return kind;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown mechanism '" + std::string(name) + "'");
}

}  // namespace privlinucb
