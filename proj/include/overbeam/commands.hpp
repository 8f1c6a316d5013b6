// SPDX-License-Identifier: Apache-2.0
//
// overbeam: overlapped beam-pattern channel estimation for single-path mmWave MIMO
// Copyright (C) 2026 The overbeam authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef OVERBEAM_COMMANDS_HPP
#define OVERBEAM_COMMANDS_HPP

#include "overbeam/config.hpp"
#include "overbeam/montecarlo.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace overbeam
{

// An internal consistency check failed after the outputs were computed.
class InvariantError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

enum ExitCode : int
{
    exit_ok = 0,
    exit_failure = 1, // runtime error or failed invariant check
    exit_usage = 2,   // bad command line or configuration
};

struct CommandOptions
{
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;   // overrides the config's seed
    std::optional<std::size_t> workers;  // overrides the config's workers
    bool quiet = false;
};

// Translate a parsed config into an experiment; throws ConfigError on bad or unknown keys.
ExperimentConfig experiment_from_config(const ConfigFile &cfg);

// The four subcommands. Each writes its data files plus manifest.json into options.out_dir and
// returns the paths written (manifest last). Errors are thrown.
std::vector<std::string> cmd_codebook(const CommandOptions &options, std::ostream &log);
std::vector<std::string> cmd_sweep(const CommandOptions &options, std::ostream &log);
std::vector<std::string> cmd_bound(const CommandOptions &options, std::ostream &log);
std::vector<std::string> cmd_trace(const CommandOptions &options, std::ostream &log);

// Dispatches by name and maps exceptions to exit codes with a diagnostic on `err`.
int run_command(std::string_view name, const CommandOptions &options, std::ostream &log, std::ostream &err);

} // namespace overbeam

#endif
