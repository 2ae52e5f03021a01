// Copyright 2026 The semsub Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace semsub::cli {

// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitIo = 2,
  kExitParse = 3,
  kExitPrecondition = 4,
  kExitInternal = 5,
};

// Subcommands. Each reads its inputs as named by the config, writes its
// output files and prints a short summary to out. Errors propagate as
// semsub::Error.
void cmd_learn(const ExperimentConfig& config, std::ostream& out);
void cmd_select(const ExperimentConfig& config, std::ostream& out);
void cmd_transfer(const ExperimentConfig& config, std::ostream& out);
// Returns the number of words that could not be substituted.
std::size_t cmd_substitute(const ExperimentConfig& config, std::ostream& out);
void cmd_gen_bench(const ExperimentConfig& config, std::ostream& out);

// Full command line including argv[0]. Never throws.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace semsub::cli
