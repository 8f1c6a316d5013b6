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

#ifndef OVERBEAM_ESTIMATOR_HPP
#define OVERBEAM_ESTIMATOR_HPP

#include "overbeam/array_model.hpp"
#include "overbeam/codebook.hpp"
#include "overbeam/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace overbeam
{

enum class Algorithm
{
    overlapped,     // M = log2(K + 1) overlapped patterns per end, M^2 slots per stage
    non_overlapped, // K disjoint patterns per end, K^2 slots per stage
};

enum class AlphaEstimator
{
    mmse_all_stages,  // MMSE combination of the selected measurement of every stage
    final_stage_only, // MMSE from the last stage's selected measurement alone
};

std::string_view to_string(Algorithm algorithm);
std::string_view to_string(AlphaEstimator estimator);
Algorithm algorithm_from_string(std::string_view name);
AlphaEstimator alpha_estimator_from_string(std::string_view name);

struct EstimatorConfig
{
    std::size_t n = 27; // antennas per end, must equal K^S
    std::size_t k = 3;  // sub-ranges per stage; 2^M - 1 for the overlapped algorithm
    double p_t = 1.0;   // power constant; stage s transmits p_s = p_t / C_s^4
    double n0 = 1.0;
    std::optional<double> var_alpha; // prior variance of alpha, N^2 when unset
    Algorithm algorithm = Algorithm::overlapped;
    AlphaEstimator alpha_estimator = AlphaEstimator::mmse_all_stages;
    GridKind grid = GridKind::uniform_spatial_frequency;

    std::size_t patterns() const; // beam patterns per end (M, or K for the baseline)
    std::size_t stages() const;   // S = log_K N
    double prior_variance() const { return var_alpha.value_or(static_cast<double>(n) * static_cast<double>(n)); }
    std::size_t slots_per_trial() const { return patterns() * patterns() * stages(); }

    // Throws std::invalid_argument when the invariants do not hold.
    void validate() const;
};

// 0-based (receive, transmit) sub-range pair.
struct PathIndex
{
    std::size_t receive = 0;
    std::size_t transmit = 0;
    friend bool operator==(const PathIndex &, const PathIndex &) = default;
};

struct StageMeasurement
{
    std::size_t stage = 1;
    CMatrix y; // M x M raw outputs, row = combining vector, column = beamforming vector
    CMatrix r; // K x K fused measurements
    PathIndex selected;
    Complex selected_value{0.0, 0.0};
    IndexRange transmit_range; // selected sub-range at each end
    IndexRange receive_range;
    double power = 0.0; // p_s
    double gain = 0.0;  // C_s
};

struct EstimationTrace
{
    Algorithm algorithm = Algorithm::overlapped;
    AlphaEstimator alpha_estimator = AlphaEstimator::mmse_all_stages;
    std::vector<StageMeasurement> stages;
    GridIndex phi_hat = 0;
    GridIndex theta_hat = 0;
    Complex alpha_hat{0.0, 0.0};
    std::vector<double> powers;
    double total_energy = 0.0; // M^2 * sum_s p_s
    std::size_t slots = 0;

    std::vector<Complex> selected_values() const;
};

// R = B^T Y B; entry (kr, kt) is the MRC output for the hypothesis (kr, kt).
CMatrix fuse_measurements(const CMatrix &y, const BeamPatternMatrix &b);

// Largest-magnitude entry; ties go to the lexicographically smallest (receive, transmit).
PathIndex select_path(const CMatrix &r);

// MMSE estimate of alpha from r = sqrt(p_t) x alpha 1 + n with n ~ CN(0, n0 I):
//   var sqrt(p_t) conj(x) sum(r) / (S var p_t + n0)
Complex estimate_alpha_mmse(std::span<const Complex> r, double p_t, Complex x, double n0, double var_alpha);
Complex estimate_alpha_final_stage(Complex r_last, double p_t, Complex x, double n0, double var_alpha);

struct LinkBudget
{
    double p_t = 1.0;
    double n0 = 1.0;
    double var_alpha = 1.0;
    AlphaEstimator alpha_estimator = AlphaEstimator::mmse_all_stages;
};

// One algorithm on one array, with its codebooks. Immutable after construction apart from the
// codebook bank's synthesize-once cache, so a single instance may serve many threads.
class Estimator
{
public:
    Estimator(std::size_t n, std::size_t k, Algorithm algorithm, GridKind grid = GridKind::uniform_spatial_frequency);
    Estimator(std::shared_ptr<const ArrayManifold> manifold, std::size_t k, Algorithm algorithm);

    Algorithm algorithm() const { return algorithm_; }
    std::size_t antennas() const { return bank_.manifold().size(); }
    std::size_t subranges() const { return bank_.subranges(); }
    std::size_t patterns() const { return bank_.patterns().patterns(); }
    std::size_t stages() const { return bank_.stages(); }
    std::size_t slots_per_trial() const { return patterns() * patterns() * stages(); }
    const CodebookBank &codebooks() const { return bank_; }
    const AngleGrid &grid() const { return bank_.manifold().grid(); }

    // C_s of the stage codebook whose parent is the given block at each end.
    double stage_gain(std::size_t stage, std::size_t transmit_block, std::size_t receive_block) const;

    // E_T / P_T = M^2 sum_s C_s^-4, along the first-block path. On the default grid every block
    // of a stage has the same C_s so the path does not matter.
    double energy_per_unit_power() const;

    EstimationTrace run(const ChannelRealization &channel, const LinkBudget &budget, Rng &noise) const;

private:
    Algorithm algorithm_;
    CodebookBank bank_;
};

// Convenience entry points that build the codebooks for one trace.
EstimationTrace run_estimation(const ChannelRealization &channel, const EstimatorConfig &cfg, std::uint64_t noise_seed);
EstimationTrace run_baseline(const ChannelRealization &channel, const EstimatorConfig &cfg, std::uint64_t noise_seed);

} // namespace overbeam

#endif
