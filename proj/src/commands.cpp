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

#include "overbeam/commands.hpp"
#include "overbeam/io.hpp"

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <utility>

namespace overbeam
{

namespace
{

using Clock = std::chrono::steady_clock;
namespace fs = std::filesystem;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Keys shared by every command.
#define OVERBEAM_COMMON_KEYS "name", "n", "k", "grid", "seed", "workers"

template <typename F>
auto as_config_error(const ConfigFile &cfg, F &&f) -> decltype(f())
{
    try
    {
        return f();
    }
    catch (const ConfigError &)
    {
        throw;
    }
    catch (const std::invalid_argument &e)
    {
        throw ConfigError(cfg.source() + ": " + e.what());
    }
    catch (const std::out_of_range &e)
    {
        throw ConfigError(cfg.source() + ": " + e.what());
    }
}

std::vector<Algorithm> algorithms_from(const ConfigFile &cfg, std::vector<std::string> fallback)
{
    std::vector<Algorithm> out;
    for (const auto &name : cfg.get_list("variants", std::move(fallback)))
        out.push_back(as_config_error(cfg, [&] { return algorithm_from_string(name); }));
    return out;
}

std::vector<AlphaEstimator> estimators_from(const ConfigFile &cfg)
{
    std::vector<AlphaEstimator> out;
    for (const auto &name : cfg.get_list("alpha_estimators", {"mmse_all_stages", "final_stage_only"}))
        out.push_back(as_config_error(cfg, [&] { return alpha_estimator_from_string(name); }));
    return out;
}

std::vector<double> energies_from(const ConfigFile &cfg, bool required)
{
    if (cfg.has("et_db"))
    {
        if (cfg.has("et_db_min") || cfg.has("et_db_max") || cfg.has("et_db_step"))
            throw ConfigError(cfg.source() + ": use either 'et_db' or 'et_db_min/max/step', not both.");
        std::vector<double> out;
        for (const auto &item : cfg.get_list("et_db"))
        {
            ConfigFile one;
            one.set("et_db", item);
            out.push_back(as_config_error(cfg, [&] { return one.get_double("et_db"); }));
        }
        return out;
    }
    if (!cfg.has("et_db_min") && !cfg.has("et_db_max") && !cfg.has("et_db_step") && !required)
        return {};
    return as_config_error(cfg, [&] {
        return energy_grid(cfg.get_double("et_db_min"), cfg.get_double("et_db_max"), cfg.get_double("et_db_step"));
    });
}

std::pair<std::size_t, std::size_t> parse_case(const ConfigFile &cfg, const std::string &key, const std::string &item)
{
    const auto slash = item.find('/');
    if (slash == std::string::npos)
        throw ConfigError(cfg.source() + ": '" + key + "' items must read K/N, got '" + item + "'.");
    ConfigFile tmp;
    tmp.set("k", item.substr(0, slash));
    tmp.set("n", item.substr(slash + 1));
    try
    {
        return {tmp.get_size("k"), tmp.get_size("n")};
    }
    catch (const ConfigError &)
    {
        throw ConfigError(cfg.source() + ": '" + key + "' items must read K/N, got '" + item + "'.");
    }
}

GridKind grid_from(const ConfigFile &cfg)
{
    return as_config_error(cfg, [&] { return grid_kind_from_string(cfg.get_string("grid", "spatial")); });
}

std::uint64_t seed_from(const ConfigFile &cfg, const CommandOptions &options)
{
    return options.seed.value_or(cfg.get_u64("seed", 1));
}

std::size_t workers_from(const ConfigFile &cfg, const CommandOptions &options)
{
    const std::size_t w = options.workers.value_or(cfg.get_size("workers", 1));
    if (w == 0)
        throw ConfigError("workers must be at least 1.");
    return w;
}

// Collects output files and writes the manifest.
class RunRecorder
{
public:
    RunRecorder(std::string command, const CommandOptions &options, const ConfigFile &cfg, std::uint64_t seed,
                std::size_t workers)
        : command_(std::move(command)), options_(options), start_(Clock::now())
    {
        manifest_["tool"] = "overbeam";
        manifest_["version"] = OVERBEAM_VERSION;
        manifest_["command"] = command_;
        manifest_["config_path"] = options.config_path;
        nlohmann::ordered_json echo = nlohmann::ordered_json::object();
        for (const auto &[key, value] : cfg.entries())
            echo[key] = value;
        echo["seed"] = std::to_string(seed); // effective values after command-line overrides
        echo["workers"] = std::to_string(workers);
        manifest_["config"] = std::move(echo);
        manifest_["seed"] = seed;
        manifest_["workers"] = workers;
        manifest_["timing_seconds"] = nlohmann::ordered_json::object();
        manifest_["checks"] = nlohmann::ordered_json::array();
        fs::create_directories(options.out_dir);
    }

    void write(const std::string &name, const std::function<void(std::ostream &)> &body)
    {
        const fs::path path = fs::path(options_.out_dir) / name;
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw std::runtime_error("Cannot write '" + path.string() + "'.");
        body(out);
        out.flush();
        if (!out)
            throw std::runtime_error("Write to '" + path.string() + "' failed.");
        if (std::find(files_.begin(), files_.end(), name) != files_.end())
            throw InvariantError("Output '" + name + "' written twice.");
        files_.push_back(name);
        paths_.push_back(path.string());
    }

    void time(const std::string &phase, double seconds) { manifest_["timing_seconds"][phase] = seconds; }

    void check(const std::string &what, bool ok)
    {
        manifest_["checks"].push_back({{"check", what}, {"passed", ok}});
        if (!ok)
            failed_.push_back(what);
    }

    std::vector<std::string> finish()
    {
        time("total", seconds_since(start_));
        manifest_["outputs"] = files_;
        const fs::path path = fs::path(options_.out_dir) / "manifest.json";
        std::ofstream out(path, std::ios::binary);
        out << manifest_.dump(2) << '\n';
        if (!out)
            throw std::runtime_error("Cannot write '" + path.string() + "'.");
        paths_.push_back(path.string());
        if (!failed_.empty())
            throw InvariantError("Invariant check failed: " + failed_.front());
        return paths_;
    }

private:
    std::string command_;
    const CommandOptions &options_;
    Clock::time_point start_;
    nlohmann::ordered_json manifest_;
    std::vector<std::string> files_;
    std::vector<std::string> paths_;
    std::vector<std::string> failed_;
};

std::vector<SlotRow> slot_rows(const ConfigFile &cfg, GridKind grid, RunRecorder &run)
{
    std::vector<SlotRow> rows;
    for (const auto &item : cfg.get_list("slot_table"))
    {
        const auto [k, n] = parse_case(cfg, "slot_table", item);
        as_config_error(cfg, [&] {
            EstimatorConfig e;
            e.n = n;
            e.k = k;
            e.grid = grid;
            e.validate();
            return 0;
        });
        // Counted from a real noiseless trace, cross-checked against M^2 S.
        const auto manifold = std::make_shared<const ArrayManifold>(AngleGrid(n, grid));
        SlotRow row{k, n, exact_stage_count(n, k), 0, 0};
        for (Algorithm a : {Algorithm::overlapped, Algorithm::non_overlapped})
        {
            const Estimator est(manifold, k, a);
            const ChannelRealization ch{n / 3, n - 1 - n / 5, {1.0, 0.0}, n};
            Rng noise(0);
            const EstimationTrace trace = est.run(ch, {1.0, 0.0, 1.0, AlphaEstimator::mmse_all_stages}, noise);
            run.check("slots " + std::string(to_string(a)) + " " + item, trace.slots == est.slots_per_trial());
            run.check("noiseless trace exact " + std::string(to_string(a)) + " " + item,
                      trace.theta_hat == ch.theta && trace.phi_hat == ch.phi);
            (a == Algorithm::overlapped ? row.overlapped : row.baseline) = trace.slots;
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace

ExperimentConfig experiment_from_config(const ConfigFile &cfg)
{
    ExperimentConfig e;
    e.n = cfg.get_size("n", e.n);
    e.k = cfg.get_size("k", e.k);
    e.grid = grid_from(cfg);
    e.seed = cfg.get_u64("seed", e.seed);
    e.workers = cfg.get_size("workers", e.workers);
    e.trials = cfg.get_size("trials", e.trials);
    if (cfg.has("var_alpha"))
        e.var_alpha = cfg.get_double("var_alpha");
    e.algorithms = algorithms_from(cfg, {"overlapped", "non_overlapped"});
    e.alpha_estimators = estimators_from(cfg);
    e.include_noiseless = cfg.get_bool("include_noiseless", false);
    e.et_db = energies_from(cfg, !e.include_noiseless);
    as_config_error(cfg, [&] {
        e.validate();
        return 0;
    });
    return e;
}

std::vector<std::string> cmd_codebook(const CommandOptions &options, std::ostream &log)
{
    const ConfigFile cfg = ConfigFile::load(options.config_path);
    cfg.require_known({OVERBEAM_COMMON_KEYS, "variants"});
    const std::size_t n = cfg.get_size("n");
    const std::size_t k = cfg.get_size("k");
    const GridKind grid = grid_from(cfg);
    const auto algorithms = algorithms_from(cfg, {"overlapped"});
    for (Algorithm a : algorithms)
        as_config_error(cfg, [&] {
            EstimatorConfig e;
            e.n = n;
            e.k = k;
            e.algorithm = a;
            e.grid = grid;
            e.validate();
            return 0;
        });

    RunRecorder run("codebook", options, cfg, seed_from(cfg, options), workers_from(cfg, options));
    const auto start = Clock::now();
    const auto manifold = std::make_shared<const ArrayManifold>(AngleGrid(n, grid));
    for (Algorithm a : algorithms)
    {
        const Estimator est(manifold, k, a);
        const CodebookBank &bank = est.codebooks();
        const std::string tag(to_string(a));
        run.write("B_" + tag + ".csv", [&](std::ostream &os) { write_pattern_matrix(os, bank.patterns()); });

        // The same vectors serve as F at the transmitter and W at the receiver (identical grids).
        for (std::size_t s = 1; s <= bank.stages(); ++s)
            run.write("codebook_" + tag + "_stage" + std::to_string(s) + ".csv",
                      [&](std::ostream &os) { write_beam_vectors(os, bank.beams(s, 0).vectors); });

        double worst_residual = 0.0;
        run.write("gains_" + tag + ".csv", [&](std::ostream &os) {
            os << "stage,block,range_begin,range_end,gain,gain_spread,max_residual,max_in_range_error,"
                  "max_out_of_range,condition\n";
            std::size_t blocks = 1;
            for (std::size_t s = 1; s <= bank.stages(); ++s, blocks *= k)
                for (std::size_t blk = 0; blk < blocks; ++blk)
                {
                    const BeamSet &beams = bank.beams(s, blk);
                    const StageCodebook sc = make_stage_codebook(s, beams, beams);
                    const GainFlatness flat =
                        gain_flatness(beams.vectors, sc.gain, bank.patterns(), beams.ranges, bank.manifold());
                    const IndexRange parent = bank.parent_range(s, blk);
                    worst_residual = std::max(worst_residual, beams.max_residual);
                    os << s << ',' << blk << ',' << parent.begin << ',' << parent.end << ',' << format_real(sc.gain)
                       << ',' << format_real(sc.gain_spread) << ',' << format_real(beams.max_residual) << ','
                       << format_real(flat.max_in_range_error) << ',' << format_real(flat.max_out_of_range) << ','
                       << format_real(bank.manifold().condition_estimate()) << '\n';
                }
        });
        run.check("codebook residual <= 1e-6 (" + tag + ")", worst_residual <= 1e-6);
        if (!options.quiet)
            log << "codebook " << tag << ": " << bank.stages() << " stages, M = " << bank.patterns().patterns()
                << ", E_T/P_T = " << format_real(est.energy_per_unit_power())
                << ", max residual = " << format_real(worst_residual) << '\n';
    }
    run.time("codebook", seconds_since(start));
    return run.finish();
}

std::vector<std::string> cmd_sweep(const CommandOptions &options, std::ostream &log)
{
    ConfigFile cfg = ConfigFile::load(options.config_path);
    cfg.require_known({OVERBEAM_COMMON_KEYS, "var_alpha", "trials", "et_db", "et_db_min", "et_db_max", "et_db_step",
                       "include_noiseless", "variants", "alpha_estimators", "outputs", "slot_table"});
    const auto outputs = cfg.get_list("outputs", {"pcef"});
    bool want_pcef = false, want_bound = false, want_alpha = false, want_slots = false;
    for (const auto &o : outputs)
    {
        if (o == "pcef")
            want_pcef = true;
        else if (o == "bound")
            want_bound = true;
        else if (o == "alpha_error")
            want_alpha = true;
        else if (o == "slots")
            want_slots = true;
        else
            throw ConfigError(cfg.source() + ": unknown output '" + o + "' (pcef, bound, alpha_error, slots).");
    }
    if (want_slots && !cfg.has("slot_table"))
        throw ConfigError(cfg.source() + ": output 'slots' needs 'slot_table'.");

    const std::uint64_t seed = seed_from(cfg, options);
    const std::size_t workers = workers_from(cfg, options);
    const bool need_sweep = want_pcef || want_alpha;

    std::optional<ExperimentConfig> exp;
    if (need_sweep || want_bound)
    {
        exp = experiment_from_config(cfg);
        exp->seed = seed;
        exp->workers = workers;
    }

    RunRecorder run("sweep", options, cfg, seed, workers);

    if (want_slots)
    {
        const auto start = Clock::now();
        const auto rows = slot_rows(cfg, grid_from(cfg), run);
        run.write("slots.csv", [&](std::ostream &os) { write_slot_table(os, rows); });
        run.time("slots", seconds_since(start));
        if (!options.quiet)
            for (const auto &r : rows)
                log << "K = " << r.k << ", N = " << r.n << ": overlapped " << r.overlapped << " slots, baseline "
                    << r.baseline << " slots\n";
    }

    if (need_sweep)
    {
        const auto start = Clock::now();
        const SweepResult result = run_sweep(*exp);
        run.time("sweep", seconds_since(start));
        for (const auto &table : result.tables)
        {
            const std::string tag(to_string(table.algorithm));
            for (const auto &p : table.points)
            {
                run.check("pcef within interval", p.ci_low <= p.pcef && p.pcef <= p.ci_high);
                if (p.noiseless)
                    run.check("noiseless point has no failures (" + tag + ")", p.failures == 0);
            }
            if (want_pcef)
                run.write("pcef_" + tag + ".csv", [&](std::ostream &os) { write_pcef_table(os, table); });
            if (want_alpha)
                for (AlphaEstimator e : exp->alpha_estimators)
                    run.write("alpha_error_" + tag + "_" + std::string(to_string(e)) + ".csv",
                              [&](std::ostream &os) { write_alpha_error_table(os, table, e); });
            if (!options.quiet)
            {
                log << tag << ": " << table.slots_per_trial << " slots/trial, E_T/P_T = "
                    << format_real(table.energy_per_unit_power) << '\n';
                for (const auto &p : table.points)
                    log << "  E_T/N0 = " << (p.noiseless ? std::string("inf") : format_real(p.et_db))
                        << " dB  PCEF = " << format_real(p.pcef) << '\n';
            }
        }
    }

    if (want_bound)
    {
        const auto start = Clock::now();
        const std::vector<BoundCurve> curves{bound_curve(exp->n, exp->k, exp->et_db, exp->prior_variance(), exp->grid)};
        for (const auto &p : curves.front().points)
            run.check("bound within [0, 1]", p.bound.total >= 0.0 && p.bound.total <= 1.0);
        run.write("bound.csv", [&](std::ostream &os) { write_bound_curves(os, curves); });
        run.time("bound", seconds_since(start));
    }
    return run.finish();
}

std::vector<std::string> cmd_bound(const CommandOptions &options, std::ostream &log)
{
    const ConfigFile cfg = ConfigFile::load(options.config_path);
    cfg.require_known({OVERBEAM_COMMON_KEYS, "cases", "var_alpha", "et_db", "et_db_min", "et_db_max", "et_db_step",
                       "include_zero_energy"});
    std::vector<std::pair<std::size_t, std::size_t>> cases;
    if (cfg.has("cases"))
    {
        if (cfg.has("n") || cfg.has("k"))
            throw ConfigError(cfg.source() + ": use either 'cases' or 'n'/'k', not both.");
        for (const auto &item : cfg.get_list("cases"))
            cases.push_back(parse_case(cfg, "cases", item));
    }
    else
        cases.emplace_back(cfg.get_size("k"), cfg.get_size("n"));
    const GridKind grid = grid_from(cfg);
    const auto et_db = energies_from(cfg, true);
    const bool zero_energy = cfg.get_bool("include_zero_energy", false);
    for (std::size_t i = 1; i < et_db.size(); ++i)
        if (!(et_db[i] > et_db[i - 1]))
            throw ConfigError(cfg.source() + ": energies must be strictly increasing.");
    for (const auto &[k, n] : cases)
        as_config_error(cfg, [&] {
            EstimatorConfig e;
            e.n = n;
            e.k = k;
            e.grid = grid;
            e.validate();
            return 0;
        });

    RunRecorder run("bound", options, cfg, seed_from(cfg, options), workers_from(cfg, options));
    const auto start = Clock::now();
    std::vector<BoundCurve> curves;
    for (const auto &[k, n] : cases)
    {
        const double var = cfg.has("var_alpha") ? cfg.get_double("var_alpha") : static_cast<double>(n * n);
        curves.push_back(bound_curve(n, k, et_db, var, grid, zero_energy));
        const std::string tag = std::to_string(k) + "/" + std::to_string(n);
        for (const auto &p : curves.back().points)
        {
            run.check("bound within [0, 1] (" + tag + ")", p.bound.total >= 0.0 && p.bound.total <= 1.0);
            if (p.zero_energy)
                run.check("zero-energy row clamped (" + tag + ")", p.bound.clamped && p.bound.total == 1.0);
        }
    }
    run.write("bound.csv", [&](std::ostream &os) { write_bound_curves(os, curves); });
    run.time("bound", seconds_since(start));
    if (!options.quiet)
        log << "bound: " << curves.size() << " curve(s), " << curves.front().points.size() << " points\n";
    return run.finish();
}

std::vector<std::string> cmd_trace(const CommandOptions &options, std::ostream &log)
{
    ConfigFile cfg = ConfigFile::load(options.config_path);
    cfg.require_known({OVERBEAM_COMMON_KEYS, "var_alpha", "variants", "alpha_estimators", "et_db", "noiseless", "trials"});
    ExperimentConfig exp;
    exp.n = cfg.get_size("n", exp.n);
    exp.k = cfg.get_size("k", exp.k);
    exp.grid = grid_from(cfg);
    exp.seed = seed_from(cfg, options);
    exp.workers = workers_from(cfg, options);
    exp.trials = cfg.get_size("trials", 1);
    if (cfg.has("var_alpha"))
        exp.var_alpha = cfg.get_double("var_alpha");
    exp.algorithms = algorithms_from(cfg, {"overlapped", "non_overlapped"});
    exp.alpha_estimators = estimators_from(cfg);
    const bool noiseless = cfg.get_bool("noiseless", false);
    const double et_db = noiseless ? cfg.get_double("et_db", 0.0) : cfg.get_double("et_db");
    exp.et_db = {et_db};
    as_config_error(cfg, [&] {
        exp.validate();
        return 0;
    });

    RunRecorder run("trace", options, cfg, exp.seed, exp.workers);
    const auto start = Clock::now();
    const auto manifold = std::make_shared<const ArrayManifold>(AngleGrid(exp.n, exp.grid));
    std::vector<Estimator> estimators;
    for (Algorithm a : exp.algorithms)
        estimators.emplace_back(manifold, exp.k, a);

    std::size_t failures = 0;
    run.write("traces.jsonl", [&](std::ostream &os) {
        for (std::size_t t = 0; t < exp.trials; ++t)
        {
            const ChannelRealization ch = sample_channel(exp, t);
            for (const auto &est : estimators)
                for (AlphaEstimator ae : exp.alpha_estimators)
                {
                    const LinkBudget budget{std::pow(10.0, et_db / 10.0) / est.energy_per_unit_power(),
                                            noiseless ? 0.0 : 1.0, exp.prior_variance(), ae};
                    Rng noise = Rng::for_trial(exp.seed, t, Stream::noise);
                    const EstimationTrace trace = est.run(ch, budget, noise);
                    const bool failed = failure_indicator(trace, ch);
                    failures += failed ? 1 : 0;
                    write_trace_jsonl(os, t, ch, trace, failed);
                }
        }
    });
    if (noiseless)
        run.check("noiseless traces recover the path", failures == 0);
    run.time("trace", seconds_since(start));
    if (!options.quiet)
        log << "trace: " << exp.trials << " trial(s), " << failures << " failed estimate(s)\n";
    return run.finish();
}

int run_command(std::string_view name, const CommandOptions &options, std::ostream &log, std::ostream &err)
{
    try
    {
        std::vector<std::string> written;
        if (name == "codebook")
            written = cmd_codebook(options, log);
        else if (name == "sweep")
            written = cmd_sweep(options, log);
        else if (name == "bound")
            written = cmd_bound(options, log);
        else if (name == "trace")
            written = cmd_trace(options, log);
        else
        {
            err << "error: unknown command '" << name << "'\n";
            return exit_usage;
        }
        if (!options.quiet)
            for (const auto &p : written)
                log << "wrote " << p << '\n';
        return exit_ok;
    }
    catch (const ConfigError &e)
    {
        err << "config error: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const InvariantError &e)
    {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }
    catch (const std::exception &e)
    {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }
}

} // namespace overbeam
