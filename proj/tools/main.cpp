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


// Command-line front end: overbeam {codebook|sweep|bound|trace} --config <file> [--out <dir>] ...

#include "overbeam/commands.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char **argv)
{
    CLI::App app{"overbeam: overlapped beam-pattern channel estimation experiments"};
    app.set_version_flag("--version", std::string(OVERBEAM_VERSION));
    app.require_subcommand(1);

    overbeam::CommandOptions options;
    std::uint64_t seed = 0;
    std::size_t workers = 1;

    const auto add = [&](const char *name, const char *help) {
        CLI::App *sub = app.add_subcommand(name, help);
        sub->add_option("--config", options.config_path, "Configuration file (key = value)")->required();
        sub->add_option("--out", options.out_dir, "Output directory")->capture_default_str();
        sub->add_option("--seed", seed, "Master seed, overrides the config");
        sub->add_option("--workers", workers, "Worker threads, overrides the config")->check(CLI::PositiveNumber);
        sub->add_flag("--quiet", options.quiet, "Only report errors");
        return sub;
    };
    add("codebook", "Synthesize and export the beam codebooks");
    add("sweep", "Monte Carlo energy sweep, slot table and bound overlay");
    add("bound", "Analytical union bound on the estimation failure probability");
    add("trace", "Dump complete single-trial estimation traces");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : overbeam::exit_usage;
    }

    CLI::App *sub = app.get_subcommands().front();
    if (sub->count("--seed"))
        options.seed = seed;
    if (sub->count("--workers"))
        options.workers = workers;
    return overbeam::run_command(sub->get_name(), options, std::cout, std::cerr);
}
