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

#include "overbeam/estimator.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace overbeam
{

std::string_view to_string(Algorithm algorithm)
{
    return algorithm == Algorithm::overlapped ? "overlapped" : "non_overlapped";
}

std::string_view to_string(AlphaEstimator estimator)
{
    return estimator == AlphaEstimator::mmse_all_stages ? "mmse_all_stages" : "final_stage_only";
}

Algorithm algorithm_from_string(std::string_view name)
{
    if (name == "overlapped")
        return Algorithm::overlapped;
    if (name == "non_overlapped" || name == "baseline")
        return Algorithm::non_overlapped;
    throw std::invalid_argument("Unknown algorithm '" + std::string(name) + "'.");
}

AlphaEstimator alpha_estimator_from_string(std::string_view name)
{
    if (name == "mmse_all_stages")
        return AlphaEstimator::mmse_all_stages;
    if (name == "final_stage_only")
        return AlphaEstimator::final_stage_only;
    throw std::invalid_argument("Unknown alpha estimator '" + std::string(name) + "'.");
}

namespace
{

std::size_t overlapped_pattern_count(std::size_t k)
{
    if (k < 3 || !std::has_single_bit(k + 1))
        throw std::invalid_argument("Overlapped design needs K = 2^M - 1 with M >= 2, got K = " + std::to_string(k) + ".");
    return static_cast<std::size_t>(std::countr_zero(k + 1));
}

BeamPatternMatrix patterns_for(Algorithm algorithm, std::size_t k)
{
    if (algorithm == Algorithm::overlapped)
        return BeamPatternMatrix::generate(overlapped_pattern_count(k));
    return BeamPatternMatrix::identity(k);
}

} // namespace

std::size_t EstimatorConfig::patterns() const
{
    return algorithm == Algorithm::overlapped ? overlapped_pattern_count(k) : k;
}

std::size_t EstimatorConfig::stages() const
{
    return exact_stage_count(n, k);
}

void EstimatorConfig::validate() const
{
    (void)patterns();
    (void)stages();
    if (!(p_t > 0.0) || !std::isfinite(p_t))
        throw std::invalid_argument("Power constant P_T must be positive and finite.");
    if (!(n0 >= 0.0) || !std::isfinite(n0))
        throw std::invalid_argument("Noise variance must be nonnegative and finite.");
    if (!(prior_variance() >= 0.0))
        throw std::invalid_argument("Prior variance of alpha must be nonnegative.");
}

std::vector<Complex> EstimationTrace::selected_values() const
{
    std::vector<Complex> r;
    r.reserve(stages.size());
    for (const auto &stage : stages)
        r.push_back(stage.selected_value);
    return r;
}

CMatrix fuse_measurements(const CMatrix &y, const BeamPatternMatrix &b)
{
    const auto m = static_cast<Eigen::Index>(b.patterns());
    if (y.rows() != m || y.cols() != m)
        throw std::invalid_argument("Measurement block must be M x M for an M x K pattern matrix.");
    const CMatrix bc = b.matrix().cast<Complex>();
    return bc.transpose() * y * bc;
}

PathIndex select_path(const CMatrix &r)
{
    if (r.size() == 0)
        throw std::invalid_argument("Measurement matrix is empty.");
    PathIndex best;
    double best_mag = -1.0;
    for (Eigen::Index kr = 0; kr < r.rows(); ++kr)
        for (Eigen::Index kt = 0; kt < r.cols(); ++kt)
        {
            const Complex v = r(kr, kt);
            if (std::isnan(v.real()) || std::isnan(v.imag()))
                throw std::invalid_argument("Measurement matrix contains NaN.");
            const double mag = std::abs(v);
            if (mag > best_mag)
            {
                best_mag = mag;
                best = {static_cast<std::size_t>(kr), static_cast<std::size_t>(kt)};
            }
        }
    return best;
}

Complex estimate_alpha_mmse(std::span<const Complex> r, double p_t, Complex x, double n0, double var_alpha)
{
    if (r.empty())
        throw std::invalid_argument("Need at least one stage measurement.");
    if (n0 < 0.0 || var_alpha < 0.0 || p_t < 0.0)
        throw std::invalid_argument("Noise variance, prior variance and power must be nonnegative.");
    const auto stages = static_cast<double>(r.size());
    const double denominator = stages * var_alpha * p_t * std::norm(x) + n0;
    if (!(denominator > 0.0))
        throw std::invalid_argument("MMSE estimate undefined: zero noise together with zero prior signal power.");
    const Complex sum = std::accumulate(r.begin(), r.end(), Complex{0.0, 0.0});
    return var_alpha * std::sqrt(p_t) * std::conj(x) * sum / denominator;
}

Complex estimate_alpha_final_stage(Complex r_last, double p_t, Complex x, double n0, double var_alpha)
{
    return estimate_alpha_mmse(std::span<const Complex>(&r_last, 1), p_t, x, n0, var_alpha);
}

// ---- Estimator --------------------------------------------------------------------------------

Estimator::Estimator(std::size_t n, std::size_t k, Algorithm algorithm, GridKind grid)
    : Estimator(std::make_shared<const ArrayManifold>(AngleGrid(n, grid)), k, algorithm)
{
}

Estimator::Estimator(std::shared_ptr<const ArrayManifold> manifold, std::size_t k, Algorithm algorithm)
    : algorithm_(algorithm), bank_(std::move(manifold), patterns_for(algorithm, k))
{
}

namespace
{

double combined_gain(const BeamSet &transmit, const BeamSet &receive)
{
    double log_sum = 0.0;
    for (double c : transmit.gains)
        log_sum += std::log(c);
    for (double c : receive.gains)
        log_sum += std::log(c);
    return std::exp(log_sum / static_cast<double>(transmit.gains.size() + receive.gains.size()));
}

} // namespace

double Estimator::stage_gain(std::size_t stage, std::size_t transmit_block, std::size_t receive_block) const
{
    return combined_gain(bank_.beams(stage, transmit_block), bank_.beams(stage, receive_block));
}

double Estimator::energy_per_unit_power() const
{
    double sum = 0.0;
    for (std::size_t s = 1; s <= stages(); ++s)
        sum += std::pow(stage_gain(s, 0, 0), -4.0);
    const auto m = static_cast<double>(patterns());
    return m * m * sum;
}

EstimationTrace Estimator::run(const ChannelRealization &channel, const LinkBudget &budget, Rng &noise) const
{
    if (channel.n != antennas())
        throw std::invalid_argument("Channel antenna count does not match the estimator.");
    if (!(budget.p_t > 0.0))
        throw std::invalid_argument("Power constant P_T must be positive.");

    const Complex pilot{1.0, 0.0};
    const std::size_t k = subranges();
    const std::size_t m = patterns();
    const auto &b = bank_.patterns();

    EstimationTrace trace;
    trace.algorithm = algorithm_;
    trace.alpha_estimator = budget.alpha_estimator;
    trace.stages.reserve(stages());

    std::size_t transmit_block = 0;
    std::size_t receive_block = 0;
    for (std::size_t s = 1; s <= stages(); ++s)
    {
        const BeamSet &transmit = bank_.beams(s, transmit_block);
        const BeamSet &receive = bank_.beams(s, receive_block);

        StageMeasurement stage;
        stage.stage = s;
        stage.gain = combined_gain(transmit, receive);
        stage.power = budget.p_t / std::pow(stage.gain, 4.0);
        stage.y = measure_block(channel, grid(), transmit.vectors, receive.vectors, stage.power, pilot, budget.n0, noise);
        stage.r = fuse_measurements(stage.y, b);
        stage.selected = select_path(stage.r);
        stage.selected_value = stage.r(static_cast<Eigen::Index>(stage.selected.receive),
                                       static_cast<Eigen::Index>(stage.selected.transmit));
        stage.transmit_range = transmit.ranges[stage.selected.transmit];
        stage.receive_range = receive.ranges[stage.selected.receive];

        transmit_block = transmit_block * k + stage.selected.transmit;
        receive_block = receive_block * k + stage.selected.receive;
        trace.powers.push_back(stage.power);
        trace.stages.push_back(std::move(stage));
    }

    trace.phi_hat = transmit_block;
    trace.theta_hat = receive_block;
    trace.total_energy = static_cast<double>(m * m) * std::accumulate(trace.powers.begin(), trace.powers.end(), 0.0);
    trace.slots = m * m * stages();

    const auto r = trace.selected_values();
    trace.alpha_hat = budget.alpha_estimator == AlphaEstimator::mmse_all_stages
                          ? estimate_alpha_mmse(r, budget.p_t, pilot, budget.n0, budget.var_alpha)
                          : estimate_alpha_final_stage(r.back(), budget.p_t, pilot, budget.n0, budget.var_alpha);
    return trace;
}

EstimationTrace run_estimation(const ChannelRealization &channel, const EstimatorConfig &cfg, std::uint64_t noise_seed)
{
    cfg.validate();
    const Estimator estimator(cfg.n, cfg.k, cfg.algorithm, cfg.grid);
    Rng noise(noise_seed);
    return estimator.run(channel, {cfg.p_t, cfg.n0, cfg.prior_variance(), cfg.alpha_estimator}, noise);
}

EstimationTrace run_baseline(const ChannelRealization &channel, const EstimatorConfig &cfg, std::uint64_t noise_seed)
{
    EstimatorConfig baseline = cfg;
    baseline.algorithm = Algorithm::non_overlapped;
    return run_estimation(channel, baseline, noise_seed);
}

} // namespace overbeam
