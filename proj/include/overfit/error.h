/*
 * Copyright 2026 The Overfit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef OVERFIT_ERROR_H_
#define OVERFIT_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace overfit {

enum class ErrorKind {
  kEmptyInput,
  kOutOfRange,
  kDomainError,
  kInfeasible,
  kNotFlagged,
  kRaggedRuns,
  kLengthMismatch,
  kParseError,
};

std::string_view error_kind_name(ErrorKind kind);

// Every failure raised by the library carries a kind so callers (and the CLI
// exit-code mapping) can dispatch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace overfit

#endif  // OVERFIT_ERROR_H_
