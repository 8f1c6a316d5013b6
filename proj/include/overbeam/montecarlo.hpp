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

#ifndef OVERBEAM_MONTECARLO_HPP
#define OVERBEAM_MONTECARLO_HPP

#include "overbeam/analysis.hpp"
#include "overbeam/estimator.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace overbeam
{

struct ExperimentConfig
{
    std::size_t n = 27;
    std::size_t k = 3;
    std::vector<Algorithm> algorithms{Algorithm::overlapped, Algorithm::non_overlapped};
    std::vector<AlphaEstimator> alpha_estimators{AlphaEstimator::mmse_all_stages, AlphaEstimator::final_stage_only};
    std::vector<double> et_db{};   // E_T / N0 in dB, strictly increasing; N0 = 1
    bool include_noiseless = false; // extra sentinel point with N0 = 0
    std::size_t trials = 10000;     // per sweep point
    std::uint64_t seed = 1;
    std::optional<double> var_alpha; // N^2 when unset
    GridKind grid = GridKind::uniform_spatial_frequency;
    std::size_t workers = 1;

    double prior_variance() const { return var_alpha.value_or(static_cast<double>(n) * static_cast<double>(n)); }
    void validate() const;
};

// min, min + step, ..., up to max (inclusive within step / 1000).
std::vector<double> energy_grid(double min_db, double max_db, double step_db);

// theta, phi uniform over the grid and alpha ~ CN(0, Var_alpha); depends only on (seed, trial).
ChannelRealization sample_channel(const ExperimentConfig &cfg, std::uint64_t trial);

// True iff phi is outside the final selected transmit sub-range or theta outside the receive one.
bool failure_indicator(const EstimationTrace &trace, const ChannelRealization &truth);

struct ErrorStatistics
{
    std::size_t count = 0;
    double mean = 0.0; // mean of |alpha_hat - alpha| / |alpha|
    double se = 0.0;   // standard error of the mean
};

struct AlphaErrorSummary
{
    AlphaEstimator estimator = AlphaEstimator::mmse_all_stages;
    ErrorStatistics all;        // unconditioned
    ErrorStatistics successful; // conditioned on a correct path estimate
};

struct SweepPoint
{
    bool noiseless = false;
    double et_db = 0.0; // meaningless for the noiseless point
    double et = 0.0;    // E_T
    double p_t = 0.0;
    double n0 = 1.0;
    std::size_t trials = 0;
    std::size_t failures = 0;
    double pcef = 0.0;
    double pcef_se = 0.0;
    double ci_low = 0.0; // normal-approximation 95% interval clipped to [0, 1]
    double ci_high = 0.0;
    bool low_count = false; // fewer than 5 failures or successes: interval unreliable
    std::size_t slots = 0;  // per trial
    std::vector<AlphaErrorSummary> alpha_errors;

    const AlphaErrorSummary &alpha_error(AlphaEstimator estimator) const;
};

struct ResultTable
{
    Algorithm algorithm = Algorithm::overlapped;
    std::size_t slots_per_trial = 0;
    double energy_per_unit_power = 0.0; // E_T / P_T
    std::vector<SweepPoint> points;
};

struct SweepResult
{
    ExperimentConfig config;
    std::vector<ResultTable> tables; // one per algorithm, config order

    const ResultTable &table(Algorithm algorithm) const;
};

// Runs every configured algorithm over the sweep with common random numbers: trial t of every point
// and every algorithm sees the same channel and the same noise stream. Results do not depend on
// cfg.workers.
SweepResult run_sweep(const ExperimentConfig &cfg);

// E_T in dB where the PCEF curve crosses `target`, by linear interpolation of log10(PCEF) against dB
// between the first bracketing pair of noisy points. Empty if the curve never crosses.
std::optional<double> energy_at_pcef(const ResultTable &table, double target);

struct BoundPoint
{
    double et_db = 0.0;
    bool zero_energy = false;
    double p_t = 0.0;
    BoundResult bound;
};

struct BoundCurve
{
    std::size_t n = 0;
    std::size_t k = 0;
    double energy_per_unit_power = 0.0;
    std::vector<BoundPoint> points;
};

// Union bound of the overlapped algorithm over an E_T / N0 grid (N0 = 1). zero_energy prepends
// the P_T = 0 row.
BoundCurve bound_curve(std::size_t n, std::size_t k, const std::vector<double> &et_db, double var_alpha,
                       GridKind grid = GridKind::uniform_spatial_frequency, bool zero_energy = false);

} // namespace overbeam

#endif
