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

#ifndef OVERBEAM_ANALYSIS_HPP
#define OVERBEAM_ANALYSIS_HPP

#include "overbeam/codebook.hpp"

#include <cstddef>
#include <stdexcept>

namespace overbeam
{

// The correct measurement r' and one competing measurement r of a stage, for a given alpha:
//   r' = alpha sqrt(P_T) x + n',  r = rho alpha sqrt(P_T) x + n,
//   E|n|^2 = E|n'|^2 = N0,  E[n^* n'] = Sigma = rho N0.
struct PairwiseContext
{
    double rho = 0.0;       // (b_kr^T b_kr') (b_kt'^T b_kt), in [0, 1]
    double n0 = 1.0;
    double p_t = 1.0;
    double var_alpha = 1.0; // E|alpha|^2

    double sigma() const { return n0 * rho; }
};

// Thrown for rho = 1: the correct hypothesis compared with itself.
class SelfTermError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

struct MarcumArguments
{
    double a = 0.0;
    double b = 0.0;
};

// Arguments of Pr(|r| > |r'| given |alpha|) = Q1(a, b) - 1/2 I0(a b) exp(-(a^2 + b^2)/2). With
// q = sqrt(1 - rho^2) and s = |alpha| sqrt(P_T):
//   a = s sqrt((1 - q) / (2 N0)),  b = s sqrt((1 + q) / (2 N0)).
// For rho = 0 this is a = 0, b = s / sqrt(N0).
MarcumArguments pairwise_marcum_arguments(const PairwiseContext &ctx, double alpha_magnitude);

// Pr(|r| > |r'|) for a fixed |alpha|. N0 = 0 is the noiseless limit (0 for rho < 1).
double pairwise_error_fixed_alpha(const PairwiseContext &ctx, double alpha_magnitude);

// Mean-square Marcum arguments under Rayleigh |alpha| with E|alpha|^2 = var_alpha.
MarcumArguments pairwise_mean_square_arguments(const PairwiseContext &ctx);

// Pr(|r| > |r'|) averaged over Rayleigh |alpha|:
//   1/2 - (B^2 - A^2) / (4 sqrt(1 + B^2 + A^2 + ((B^2 - A^2)/2)^2))
// with A^2, B^2 the mean-square arguments above. Evaluated in a cancellation-free form.
double pairwise_error_rayleigh(const PairwiseContext &ctx);

// rho for true sub-ranges (kr', kt') against the hypothesis (kr, kt).
double hypothesis_correlation(const BeamPatternMatrix &b, std::size_t kr, std::size_t kt, std::size_t kr_true,
                              std::size_t kt_true);

struct BoundResult
{
    std::size_t stages = 0;
    double per_stage = 0.0;       // union bound on P_fail(s | s-1); may exceed 1
    double unclamped_total = 0.0; // stages * per_stage
    double total = 0.0;           // min(1, unclamped_total)
    bool clamped = false;
    // terms(true, competitor) with index kr * K + kt; self terms are 0.
    RMatrix terms;
};

// Union bound on the probability of channel estimation failure after `stages` stages of the
// overlapped search with pattern matrix b.
BoundResult pcef_upper_bound(const BeamPatternMatrix &b, std::size_t stages, double p_t, double n0,
                             double var_alpha);

} // namespace overbeam

#endif
