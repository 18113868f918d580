/*
 * Copyright 2026 The fsub Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Batch command-line front end. Exit codes: 0 derivable or success, 1 not
// derivable or disagreements found, 2 fuel exhausted, 3 parse or validation
// error, 4 usage error.

#ifndef FSUB_CLI_H_
#define FSUB_CLI_H_

#include <iosfwd>
#include <span>
#include <string>

namespace fsk {

inline constexpr int kExitDerivable = 0;
inline constexpr int kExitNotDerivable = 1;
inline constexpr int kExitFuelExhausted = 2;
inline constexpr int kExitInvalid = 3;
inline constexpr int kExitUsage = 4;

// `args` excludes the program name. Results go to `out`; diagnostics are one
// line each on `err`. `in` backs the `-` file argument.
int run(std::span<const std::string> args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace fsk

#endif  // FSUB_CLI_H_
