// fbcc/cli.h

// Copyright 2026 The fbcc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef FBCC_CLI_H_
#define FBCC_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace fbcc {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one `fbcc` subcommand. `args` excludes the program name.
/// Subcommands: make-bank, extract, train-fbnn, export-learned-bank,
/// train-gmm, score, eval, inspect. Returns 0 on success, 2 on a usage
/// error and 1 when a pipeline stage fails.
int run_command(const std::vector<std::string> &args, std::ostream &out,
                std::ostream &err);

}  // namespace fbcc

#endif  // FBCC_CLI_H_
