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

#include "overbeam/analysis.hpp"
#include "overbeam/special_functions.hpp"

#include <algorithm>
#include <cmath>

namespace overbeam
{

namespace
{

void check_context(const PairwiseContext &ctx)
{
    if (!(ctx.rho >= 0.0) || ctx.rho > 1.0)
        throw std::invalid_argument("Correlation factor must lie in [0, 1].");
    if (ctx.rho == 1.0)
        throw SelfTermError("rho = 1 is the correct hypothesis itself; its pairwise term is excluded.");
    if (!(ctx.n0 >= 0.0) || !(ctx.p_t >= 0.0) || !(ctx.var_alpha >= 0.0))
        throw std::invalid_argument("Noise variance, power and prior variance must be nonnegative.");
}

double orthogonal_part(double rho)
{
    return std::sqrt((1.0 - rho) * (1.0 + rho));
}

} // namespace

MarcumArguments pairwise_marcum_arguments(const PairwiseContext &ctx, double alpha_magnitude)
{
    check_context(ctx);
    if (!(ctx.n0 > 0.0))
        throw std::invalid_argument("Marcum arguments need a positive noise variance.");
    if (!(alpha_magnitude >= 0.0))
        throw std::invalid_argument("|alpha| must be nonnegative.");
    const double q = orthogonal_part(ctx.rho);
    const double s = alpha_magnitude * std::sqrt(ctx.p_t);
    // 1 - q is formed as rho^2 / (1 + q) to keep precision for small rho.
    return {s * std::sqrt(ctx.rho * ctx.rho / (1.0 + q) / (2.0 * ctx.n0)), s * std::sqrt((1.0 + q) / (2.0 * ctx.n0))};
}

double pairwise_error_fixed_alpha(const PairwiseContext &ctx, double alpha_magnitude)
{
    check_context(ctx);
    if (!(alpha_magnitude >= 0.0))
        throw std::invalid_argument("|alpha| must be nonnegative.");
    if (ctx.n0 == 0.0)
        return 0.0;
    const auto [a, b] = pairwise_marcum_arguments(ctx, alpha_magnitude);
    // I0(ab) exp(-(a^2 + b^2)/2) = e^{-ab} I0(ab) exp(-(a - b)^2 / 2)
    const double p = marcum_q1(a, b) - 0.5 * bessel_i0_scaled(a * b) * std::exp(-0.5 * (a - b) * (a - b));
    return std::clamp(p, 0.0, 0.5);
}

MarcumArguments pairwise_mean_square_arguments(const PairwiseContext &ctx)
{
    check_context(ctx);
    if (!(ctx.n0 > 0.0))
        throw std::invalid_argument("Mean-square arguments need a positive noise variance.");
    const double q = orthogonal_part(ctx.rho);
    const double snr = ctx.p_t * ctx.var_alpha / ctx.n0;
    return {0.5 * snr * ctx.rho * ctx.rho / (1.0 + q), 0.5 * snr * (1.0 + q)};
}

double pairwise_error_rayleigh(const PairwiseContext &ctx)
{
    check_context(ctx);
    const double signal = ctx.p_t * ctx.var_alpha;
    if (ctx.n0 == 0.0)
    {
        if (signal == 0.0)
            throw std::invalid_argument("Pairwise error undefined without signal and without noise.");
        return 0.0;
    }
    const auto [a_sq, b_sq] = pairwise_mean_square_arguments(ctx);
    // 1/2 - d / (4 s) == (4 s^2 - d^2) / (4 s (2 s + d)) and 4 s^2 - d^2 = 4 (1 + A^2 + B^2).
    const double d = b_sq - a_sq;
    const double s = std::sqrt(1.0 + a_sq + b_sq + 0.25 * d * d);
    return (1.0 + a_sq + b_sq) / (s * (2.0 * s + d));
}

double hypothesis_correlation(const BeamPatternMatrix &b, std::size_t kr, std::size_t kt, std::size_t kr_true,
                              std::size_t kt_true)
{
    const auto &m = b.matrix();
    const auto col = [&](std::size_t k) {
        if (k >= b.subranges())
            throw std::out_of_range("Sub-range index out of range.");
        return m.col(static_cast<Eigen::Index>(k));
    };
    const double rho = col(kr).dot(col(kr_true)) * col(kt_true).dot(col(kt));
    return std::clamp(rho, 0.0, 1.0);
}

BoundResult pcef_upper_bound(const BeamPatternMatrix &b, std::size_t stages, double p_t, double n0,
                             double var_alpha)
{
    if (stages == 0)
        throw std::invalid_argument("Need at least one stage.");
    const std::size_t k = b.subranges();
    const std::size_t hypotheses = k * k;

    BoundResult result;
    result.stages = stages;
    result.terms = RMatrix::Zero(static_cast<Eigen::Index>(hypotheses), static_cast<Eigen::Index>(hypotheses));

    double sum = 0.0;
    for (std::size_t truth = 0; truth < hypotheses; ++truth)
        for (std::size_t other = 0; other < hypotheses; ++other)
        {
            if (truth == other)
                continue;
            const double rho = hypothesis_correlation(b, other / k, other % k, truth / k, truth % k);
            // Distinct unit columns never give rho = 1 except for the pair itself.
            const double term = pairwise_error_rayleigh({std::min(rho, std::nextafter(1.0, 0.0)), n0, p_t, var_alpha});
            result.terms(static_cast<Eigen::Index>(truth), static_cast<Eigen::Index>(other)) = term;
            sum += term;
        }

    result.per_stage = sum / static_cast<double>(hypotheses);
    result.unclamped_total = static_cast<double>(stages) * result.per_stage;
    result.clamped = result.unclamped_total > 1.0;
    result.total = std::min(1.0, result.unclamped_total);
    return result;
}

} // namespace overbeam
