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

#ifndef PRIVLINUCB_ERRORS_H_
#define PRIVLINUCB_ERRORS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace privlinucb {

enum class ErrorCode {
  kInvalidArgument,
  kNotPositiveDefinite,
  kDomainError,
  kEmptyDecisionSet,
  kOutOfOrderInsert,
  kQueryBeyondHorizon,
  kStaleQuery,
  kInvalidRegime,
  kDegenerateFit,
  kIoError,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception type. The code
// lets callers (the harness in particular) decide whether a failure is a
// configuration problem or a runtime one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace privlinucb

#endif  // PRIVLINUCB_ERRORS_H_
