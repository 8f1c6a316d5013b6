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


// Independent reference computations shared by the unit and acceptance tests. They reuse nothing
// from the library beyond plain data types.

#ifndef OVERBEAM_TEST_ORACLES_HPP
#define OVERBEAM_TEST_ORACLES_HPP

#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>

namespace oracle
{

struct Frequency
{
    double p = 0.0;
    double se = 0.0;
};

// Pr(|r| > |r'|) by direct simulation of r' = s + n', r = rho s + n with complex Gaussian noise of
// variance n0 per sample and E[n^* n'] = rho n0.
inline Frequency pairwise_mc(double rho, double s, double n0, std::size_t draws, std::uint64_t seed)
{
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> z(0.0, std::sqrt(0.5));
    const double c = std::sqrt(n0);
    const double d = std::sqrt(n0 * (1.0 - rho * rho));
    std::size_t hits = 0;
    for (std::size_t i = 0; i < draws; ++i)
    {
        const std::complex<double> z1(z(gen), z(gen));
        const std::complex<double> z2(z(gen), z(gen));
        const std::complex<double> n_ok = c * z1;
        const std::complex<double> n_bad = rho * n_ok + d * z2;
        if (std::abs(rho * s + n_bad) > std::abs(s + n_ok))
            ++hits;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(draws);
    return {p, std::sqrt(std::max(p * (1.0 - p), 1.0 / static_cast<double>(draws)) / static_cast<double>(draws))};
}

inline double marcum_q1(double a, double b)
{
    if (b == 0.0)
        return 1.0;
    boost::math::non_central_chi_squared dist(2.0, a * a);
    return boost::math::cdf(boost::math::complement(dist, b * b));
}

inline double i0_scaled(double z)
{
    if (z < 700.0)
        return std::cyl_bessel_i(0.0, z) * std::exp(-z);
    return (1.0 + 1.0 / (8.0 * z) + 9.0 / (128.0 * z * z)) / std::sqrt(2.0 * std::numbers::pi * z);
}

// Fixed-|alpha| pairwise error from the Marcum form with correlated-pair arguments.
inline double pairwise_fixed(double rho, double s, double n0)
{
    const double q = std::sqrt(1.0 - rho * rho);
    const double a = s * std::sqrt((1.0 - q) / (2.0 * n0));
    const double b = s * std::sqrt((1.0 + q) / (2.0 * n0));
    return marcum_q1(a, b) - 0.5 * i0_scaled(a * b) * std::exp(-0.5 * (a - b) * (a - b));
}

// Average of pairwise_fixed over Rayleigh |alpha| with E|alpha|^2 = var.
inline double pairwise_rayleigh_quadrature(double rho, double p_t, double var, double n0)
{
    auto f = [&](double x) {
        if (x == 0.0)
            return 0.0;
        return pairwise_fixed(rho, x * std::sqrt(p_t), n0) * (2.0 * x / var) * std::exp(-x * x / var);
    };
    // the Rayleigh weight is below exp(-900) past 30 standard deviations
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 30.0 * std::sqrt(var), 15, 1e-10);
}

} // namespace oracle

#endif
