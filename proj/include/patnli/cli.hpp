/*
 * Copyright 2026 The patnli Authors.
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

#ifndef PATNLI_CLI_HPP_
#define PATNLI_CLI_HPP_

#include <iosfwd>
#include <span>
#include <string>

namespace patnli::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // validation or input errors
inline constexpr int kExitUsage = 2;

inline constexpr unsigned long long kDefaultSeed = 42;

// Runs one subcommand. `args[0]` is the program name. Reports go to `out`,
// diagnostics and usage text to `err`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace patnli::cli

#endif  // PATNLI_CLI_HPP_
