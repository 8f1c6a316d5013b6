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

#include "overbeam/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace overbeam
{

namespace
{

constexpr double series_limit = 20.0; // power series below, asymptotic expansion above
constexpr double eps = std::numeric_limits<double>::epsilon();

double i0_power_series(double z)
{
    const double q = 0.25 * z * z;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 500; ++k)
    {
        term *= q / (static_cast<double>(k) * static_cast<double>(k));
        sum += term;
        if (term < 0.25 * eps * sum)
            break;
    }
    return sum;
}

// e^{-z} I0(z) ~ (2 pi z)^{-1/2} sum_k ((2k-1)!!)^2 / (k! 8^k z^k)
double i0_scaled_asymptotic(double z)
{
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k)
    {
        const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * z);
        if (next >= term)
            break; // the expansion started diverging
        term = next;
        sum += term;
        if (term < 0.25 * eps * sum)
            break;
    }
    return sum / std::sqrt(2.0 * std::numbers::pi * z);
}

void check_marcum_argument(double v)
{
    if (!(v >= 0.0) || !std::isfinite(v))
        throw std::invalid_argument("Marcum Q arguments must be finite and nonnegative.");
}

} // namespace

double bessel_i0_scaled(double z)
{
    if (!std::isfinite(z))
        throw std::invalid_argument("Bessel argument must be finite.");
    z = std::abs(z);
    if (z <= series_limit)
        return i0_power_series(z) * std::exp(-z);
    return i0_scaled_asymptotic(z);
}

double bessel_i0(double z)
{
    if (std::abs(z) > 700.0)
        throw std::range_error("I0 overflows for |z| > 700.");
    z = std::abs(z);
    if (z <= series_limit)
        return i0_power_series(z);
    return i0_scaled_asymptotic(z) * std::exp(z);
}

std::vector<double> bessel_i_scaled_sequence(double z, std::size_t kmax)
{
    if (!(z >= 0.0) || !std::isfinite(z))
        throw std::invalid_argument("Bessel argument must be finite and nonnegative.");
    std::vector<double> values(kmax + 1, 0.0);
    values[0] = bessel_i0_scaled(z);
    if (z == 0.0 || kmax == 0)
        return values;
    if (z < 1e-8)
    {
        // Leading two terms of the ascending series are exact to double precision here.
        double lead = std::exp(-z);
        for (std::size_t k = 1; k <= kmax; ++k)
        {
            lead *= 0.5 * z / static_cast<double>(k);
            values[k] = lead * (1.0 + 0.25 * z * z / static_cast<double>(k + 1));
        }
        return values;
    }

    // Miller's algorithm: I_{k-1} = (2k / z) I_k + I_{k+1}, started far enough above kmax that
    // I_start / I_kmax is negligible (I_k / I_0 ~ exp(-k^2 / 2z) while k << z).
    const auto k_sq = static_cast<double>(kmax) * static_cast<double>(kmax);
    const auto start = static_cast<std::size_t>(std::ceil(std::sqrt(k_sq + 100.0 * z))) + kmax / 2 + 20;

    constexpr double big = 1e250;
    double upper = 0.0; // I_{k+1}
    double current = 1e-280;
    for (std::size_t k = start; k > 0; --k)
    {
        const double lower = (2.0 * static_cast<double>(k) / z) * current + upper;
        upper = current;
        current = lower;
        if (k - 1 <= kmax)
            values[k - 1] = current;
        if (std::abs(current) > big)
        {
            current /= big;
            upper /= big;
            for (std::size_t j = k - 1; j <= kmax && j < values.size(); ++j)
                values[j] /= big;
        }
    }
    // values[0] now holds the unnormalized I_0.
    const double scale = bessel_i0_scaled(z) / values[0];
    for (double &v : values)
        v *= scale;
    return values;
}

double marcum_q1(double a, double b)
{
    check_marcum_argument(a);
    check_marcum_argument(b);
    if (b == 0.0)
        return 1.0;
    if (a == 0.0)
        return std::exp(-0.5 * b * b);

    const double z = a * b;
    const bool lower_branch = a < b; // sum converges with ratio a/b; otherwise with b/a
    const double ratio = lower_branch ? a / b : b / a;
    const double envelope = std::exp(-0.5 * (a - b) * (a - b));

    // Terms (ratio)^k e^{-z} I_k(z) fall off at least as fast as exp(-k^2 / 2(z + k)); the
    // sequence length covers that tail and the sum below stops as soon as terms are negligible.
    const auto kmax = static_cast<std::size_t>(std::ceil(std::sqrt(100.0 * z))) + 40;
    const std::vector<double> scaled = bessel_i_scaled_sequence(z, kmax);

    double sum = 0.0;
    double power = 1.0;
    for (std::size_t k = 0; k <= kmax; ++k)
    {
        const double term = power * scaled[k];
        if (k > 0 || lower_branch)
            sum += term;
        if (k > 0 && term < 0.25 * eps * sum)
            break;
        power *= ratio;
    }

    const double q = lower_branch ? envelope * sum : 1.0 - envelope * sum;
    return std::fmin(1.0, std::fmax(0.0, q));
}

} // namespace overbeam
