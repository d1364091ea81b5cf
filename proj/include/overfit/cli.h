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

#ifndef OVERFIT_CLI_H_
#define OVERFIT_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace overfit::cli {

// Stable exit-code contract.
inline constexpr int kExitOk = 0;          // null retained / bound holds
inline constexpr int kExitInputError = 1;  // unreadable, malformed, infeasible
inline constexpr int kExitUsage = 2;       // bad flags or parameters
inline constexpr int kExitRejected = 3;    // null rejected / bound violated

// Runs the command line `args` (without the program name). JSON results go
// to `out` (or to --out), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace overfit::cli

#endif  // OVERFIT_CLI_H_
