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

#include "overbeam/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace overbeam
{

void ExperimentConfig::validate() const
{
    if (algorithms.empty())
        throw std::invalid_argument("At least one algorithm is required.");
    if (alpha_estimators.empty())
        throw std::invalid_argument("At least one alpha estimator is required.");
    if (et_db.empty() && !include_noiseless)
        throw std::invalid_argument("The energy sweep is empty.");
    for (std::size_t i = 0; i < et_db.size(); ++i)
    {
        if (!std::isfinite(et_db[i]))
            throw std::invalid_argument("Sweep energies must be finite.");
        if (i > 0 && !(et_db[i] > et_db[i - 1]))
            throw std::invalid_argument("Sweep energies must be strictly increasing.");
    }
    if (trials == 0)
        throw std::invalid_argument("Need at least one trial per point.");
    if (workers == 0)
        throw std::invalid_argument("Need at least one worker.");
    if (!(prior_variance() > 0.0) || !std::isfinite(prior_variance()))
        throw std::invalid_argument("Prior variance of alpha must be positive.");
    for (Algorithm a : algorithms)
    {
        EstimatorConfig e;
        e.n = n;
        e.k = k;
        e.algorithm = a;
        e.grid = grid;
        e.validate();
    }
}

std::vector<double> energy_grid(double min_db, double max_db, double step_db)
{
    if (!std::isfinite(min_db) || !std::isfinite(max_db) || !(step_db > 0.0) || max_db < min_db)
        throw std::invalid_argument("Energy grid needs finite min <= max and a positive step.");
    std::vector<double> grid;
    const double tolerance = 1e-3 * step_db;
    for (std::size_t i = 0;; ++i)
    {
        const double v = min_db + static_cast<double>(i) * step_db;
        if (v > max_db + tolerance)
            break;
        grid.push_back(v);
    }
    return grid;
}

ChannelRealization sample_channel(const ExperimentConfig &cfg, std::uint64_t trial)
{
    Rng rng = Rng::for_trial(cfg.seed, trial, Stream::channel);
    ChannelRealization ch;
    ch.n = cfg.n;
    ch.theta = rng.uniform_index(cfg.n);
    ch.phi = rng.uniform_index(cfg.n);
    ch.alpha = rng.complex_gaussian(cfg.prior_variance());
    return ch;
}

bool failure_indicator(const EstimationTrace &trace, const ChannelRealization &truth)
{
    if (trace.stages.empty())
        throw std::invalid_argument("Trace has no stages.");
    const StageMeasurement &last = trace.stages.back();
    return !last.transmit_range.contains(truth.phi) || !last.receive_range.contains(truth.theta);
}

const AlphaErrorSummary &SweepPoint::alpha_error(AlphaEstimator estimator) const
{
    for (const auto &e : alpha_errors)
        if (e.estimator == estimator)
            return e;
    throw std::out_of_range("Alpha estimator was not part of the sweep.");
}

const ResultTable &SweepResult::table(Algorithm algorithm) const
{
    for (const auto &t : tables)
        if (t.algorithm == algorithm)
            return t;
    throw std::out_of_range("Algorithm was not part of the sweep.");
}

namespace
{

// Neumaier compensated sum; fed in trial order so the result is independent of scheduling.
class CompensatedSum
{
public:
    void add(double v)
    {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            c_ += (sum_ - t) + v;
        else
            c_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + c_; }

private:
    double sum_ = 0.0;
    double c_ = 0.0;
};

class MomentAccumulator
{
public:
    void add(double v)
    {
        ++count_;
        sum_.add(v);
        sum_sq_.add(v * v);
    }
    ErrorStatistics finish() const
    {
        ErrorStatistics s;
        s.count = count_;
        if (count_ == 0)
            return s;
        const auto n = static_cast<double>(count_);
        s.mean = sum_.value() / n;
        if (count_ > 1)
        {
            const double var = std::max(0.0, (sum_sq_.value() - n * s.mean * s.mean) / (n - 1.0));
            s.se = std::sqrt(var / n);
        }
        return s;
    }

private:
    std::size_t count_ = 0;
    CompensatedSum sum_;
    CompensatedSum sum_sq_;
};

struct TrialOutcome
{
    bool failed = false;
    std::vector<double> relative_error; // per alpha estimator
};

// Runs body(i) for i in [0, count) on `workers` threads. The first exception is rethrown.
template <typename Body>
void parallel_for(std::size_t count, std::size_t workers, Body &&body)
{
    workers = std::max<std::size_t>(1, std::min(workers, count));
    if (workers == 1)
    {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }
    constexpr std::size_t chunk = 64;
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        try
        {
            for (;;)
            {
                const std::size_t begin = next.fetch_add(chunk);
                if (begin >= count)
                    break;
                const std::size_t end = std::min(count, begin + chunk);
                for (std::size_t i = begin; i < end; ++i)
                    body(i);
            }
        }
        catch (...)
        {
            std::lock_guard lock(error_mutex);
            if (!error)
                error = std::current_exception();
            next.store(count);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w)
        pool.emplace_back(worker);
    worker();
    for (auto &t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

Complex alpha_estimate(const EstimationTrace &trace, AlphaEstimator estimator, const LinkBudget &budget)
{
    const Complex pilot{1.0, 0.0};
    const auto r = trace.selected_values();
    if (estimator == AlphaEstimator::mmse_all_stages)
        return estimate_alpha_mmse(r, budget.p_t, pilot, budget.n0, budget.var_alpha);
    return estimate_alpha_final_stage(r.back(), budget.p_t, pilot, budget.n0, budget.var_alpha);
}

double binomial_z()
{
    return 1.959963984540054;
}

} // namespace

SweepResult run_sweep(const ExperimentConfig &cfg)
{
    cfg.validate();

    const auto manifold = std::make_shared<const ArrayManifold>(AngleGrid(cfg.n, cfg.grid));
    std::vector<Estimator> estimators;
    estimators.reserve(cfg.algorithms.size());
    for (Algorithm a : cfg.algorithms)
        estimators.emplace_back(manifold, cfg.k, a);

    SweepResult result;
    result.config = cfg;
    for (const auto &e : estimators)
        result.tables.push_back({e.algorithm(), e.slots_per_trial(), e.energy_per_unit_power(), {}});

    struct PointSpec
    {
        bool noiseless;
        double et_db;
    };
    std::vector<PointSpec> specs;
    if (cfg.include_noiseless)
        specs.push_back({true, 0.0});
    for (double db : cfg.et_db)
        specs.push_back({false, db});

    const std::size_t n_alg = estimators.size();
    const std::size_t n_est = cfg.alpha_estimators.size();
    std::vector<TrialOutcome> outcomes(cfg.trials * n_alg);

    for (const PointSpec &spec : specs)
    {
        const double et = spec.noiseless ? 1.0 : std::pow(10.0, spec.et_db / 10.0);
        const double n0 = spec.noiseless ? 0.0 : 1.0;
        std::vector<LinkBudget> budgets;
        for (std::size_t a = 0; a < n_alg; ++a)
            budgets.push_back({et / result.tables[a].energy_per_unit_power, n0, cfg.prior_variance(),
                               AlphaEstimator::mmse_all_stages});

        parallel_for(cfg.trials, cfg.workers, [&](std::size_t trial) {
            const ChannelRealization channel = sample_channel(cfg, trial);
            for (std::size_t a = 0; a < n_alg; ++a)
            {
                Rng noise = Rng::for_trial(cfg.seed, trial, Stream::noise);
                const EstimationTrace trace = estimators[a].run(channel, budgets[a], noise);
                TrialOutcome &out = outcomes[trial * n_alg + a];
                out.failed = failure_indicator(trace, channel);
                out.relative_error.resize(n_est);
                for (std::size_t e = 0; e < n_est; ++e)
                {
                    const Complex est = alpha_estimate(trace, cfg.alpha_estimators[e], budgets[a]);
                    out.relative_error[e] = std::abs(est - channel.alpha) / std::abs(channel.alpha);
                }
            }
        });

        for (std::size_t a = 0; a < n_alg; ++a)
        {
            SweepPoint p;
            p.noiseless = spec.noiseless;
            p.et_db = spec.et_db;
            p.et = et;
            p.p_t = budgets[a].p_t;
            p.n0 = n0;
            p.trials = cfg.trials;
            p.slots = result.tables[a].slots_per_trial;

            std::vector<MomentAccumulator> all(n_est), ok(n_est);
            for (std::size_t t = 0; t < cfg.trials; ++t)
            {
                const TrialOutcome &out = outcomes[t * n_alg + a];
                p.failures += out.failed ? 1 : 0;
                for (std::size_t e = 0; e < n_est; ++e)
                {
                    all[e].add(out.relative_error[e]);
                    if (!out.failed)
                        ok[e].add(out.relative_error[e]);
                }
            }
            const auto trials = static_cast<double>(p.trials);
            p.pcef = static_cast<double>(p.failures) / trials;
            p.pcef_se = std::sqrt(p.pcef * (1.0 - p.pcef) / trials);
            p.ci_low = std::max(0.0, p.pcef - binomial_z() * p.pcef_se);
            p.ci_high = std::min(1.0, p.pcef + binomial_z() * p.pcef_se);
            p.low_count = p.failures < 5 || p.trials - p.failures < 5;
            for (std::size_t e = 0; e < n_est; ++e)
                p.alpha_errors.push_back({cfg.alpha_estimators[e], all[e].finish(), ok[e].finish()});
            result.tables[a].points.push_back(std::move(p));
        }
    }
    return result;
}

std::optional<double> energy_at_pcef(const ResultTable &table, double target)
{
    if (!(target > 0.0 && target < 1.0))
        throw std::invalid_argument("Target PCEF must lie in (0, 1).");
    const SweepPoint *prev = nullptr;
    for (const auto &p : table.points)
    {
        if (p.noiseless)
            continue;
        if (prev != nullptr && prev->pcef >= target && p.pcef <= target)
        {
            if (p.pcef == prev->pcef)
                return prev->et_db;
            if (p.pcef == 0.0)
                return p.et_db; // no log interpolation to zero
            const double l0 = std::log10(prev->pcef);
            const double l1 = std::log10(p.pcef);
            const double t = (std::log10(target) - l0) / (l1 - l0);
            return prev->et_db + t * (p.et_db - prev->et_db);
        }
        prev = &p;
    }
    return std::nullopt;
}

BoundCurve bound_curve(std::size_t n, std::size_t k, const std::vector<double> &et_db, double var_alpha,
                       GridKind grid, bool zero_energy)
{
    const Estimator estimator(n, k, Algorithm::overlapped, grid);
    BoundCurve curve;
    curve.n = n;
    curve.k = k;
    curve.energy_per_unit_power = estimator.energy_per_unit_power();
    const auto &b = estimator.codebooks().patterns();
    if (zero_energy)
        curve.points.push_back({0.0, true, 0.0, pcef_upper_bound(b, estimator.stages(), 0.0, 1.0, var_alpha)});
    for (double db : et_db)
    {
        const double p_t = std::pow(10.0, db / 10.0) / curve.energy_per_unit_power;
        curve.points.push_back({db, false, p_t, pcef_upper_bound(b, estimator.stages(), p_t, 1.0, var_alpha)});
    }
    return curve;
}

} // namespace overbeam
