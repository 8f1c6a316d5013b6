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


#include "catch_amalgamated.hpp"

#include "oracles.hpp"
#include "overbeam/analysis.hpp"
#include "overbeam/special_functions.hpp"

#include <cmath>
#include <limits>

using namespace overbeam;
using Catch::Approx;

TEST_CASE("analysis - fixed alpha limits and monotonicity", "[analysis]")
{
    CHECK(pairwise_error_fixed_alpha({0.3, 1.0, 1.0, 1.0}, 0.0) == Approx(0.5).epsilon(1e-14));
    CHECK(pairwise_error_fixed_alpha({0.0, 1.0, 1.0, 1.0}, 40.0) < 1e-100);
    for (double rho : {0.0, 0.4, 0.9})
    {
        double prev = 0.5 + 1e-15;
        for (double s = 0.0; s < 8.0; s += 0.25)
        {
            const double p = pairwise_error_fixed_alpha({rho, 1.0, 1.0, 1.0}, s);
            CHECK(p <= prev);
            CHECK(p >= 0.0);
            prev = p;
        }
    }
    CHECK(pairwise_error_fixed_alpha({0.5, 0.0, 1.0, 1.0}, 2.0) == 0.0);
    CHECK_THROWS_AS(pairwise_error_fixed_alpha({1.0, 1.0, 1.0, 1.0}, 1.0), SelfTermError);
    CHECK_THROWS_AS(pairwise_error_fixed_alpha({1.2, 1.0, 1.0, 1.0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(pairwise_error_fixed_alpha({-0.1, 1.0, 1.0, 1.0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(pairwise_error_fixed_alpha({0.1, 1.0, 1.0, 1.0}, -1.0), std::invalid_argument);
}

TEST_CASE("analysis - rho = 0 reduces to the uncorrelated Marcum form", "[analysis]")
{
    const PairwiseContext ctx{0.0, 2.0, 3.0, 1.0};
    const double s = 1.7;
    const auto [a, b] = pairwise_marcum_arguments(ctx, s);
    CHECK(a == 0.0);
    CHECK(b == Approx(s * std::sqrt(3.0 / 2.0)));
    // with a = 0: exp(-b^2/2) - 1/2 exp(-b^2/2) = exp(-b^2/2) / 2
    CHECK(pairwise_error_fixed_alpha(ctx, s) == Approx(0.5 * std::exp(-0.5 * b * b)).epsilon(1e-14));
    CHECK(ctx.sigma() == 0.0);
}

TEST_CASE("analysis - fixed alpha agrees with simulation of the correlated pair", "[analysis]")
{
    for (double rho : {0.0, 0.5, 0.7071067811865476})
        for (double s : {0.7, 1.6})
        {
            const auto mc = oracle::pairwise_mc(rho, s, 1.0, 200000, 99);
            const double p = pairwise_error_fixed_alpha({rho, 1.0, 1.0, 1.0}, s);
            INFO("rho = " << rho << ", s = " << s << ", mc = " << mc.p);
            CHECK(std::abs(p - mc.p) < 4.0 * mc.se);
            CHECK(p == Approx(oracle::pairwise_fixed(rho, s, 1.0)).epsilon(1e-10).margin(1e-15));
        }
}

TEST_CASE("analysis - the uncorrected correlated-noise arguments miss the simulation", "[analysis]")
{
    // A = rho s / sqrt(N0 - Sigma), B = s / sqrt(N0 - Sigma): documents why the library does not use it.
    const double rho = 0.5, s = std::sqrt(2.0), n0 = 1.0;
    const double a = rho * s / std::sqrt(n0 * (1.0 - rho));
    const double b = s / std::sqrt(n0 * (1.0 - rho));
    const double naive = marcum_q1(a, b) - 0.5 * bessel_i0(a * b) * std::exp(-0.5 * (a * a + b * b));
    const auto mc = oracle::pairwise_mc(rho, s, n0, 400000, 5);
    CHECK(std::abs(naive - mc.p) > 20.0 * mc.se);
    CHECK(std::abs(pairwise_error_fixed_alpha({rho, n0, 1.0, 1.0}, s) - mc.p) < 4.0 * mc.se);
}

TEST_CASE("analysis - Rayleigh average", "[analysis]")
{
    CHECK(pairwise_error_rayleigh({0.3, 1.0, 0.0, 5.0}) == Approx(0.5));
    CHECK(pairwise_error_rayleigh({0.0, 1.0, 1e12, 1.0}) < 1e-11);
    CHECK(pairwise_error_rayleigh({0.2, 0.0, 1.0, 1.0}) == 0.0);
    CHECK_THROWS_AS(pairwise_error_rayleigh({0.2, 0.0, 0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(pairwise_error_rayleigh({1.0, 1.0, 1.0, 1.0}), SelfTermError);

    for (double snr : {0.1, 1.0, 10.0, 1e3})
    {
        double prev = 0.0;
        for (double rho : {0.0, 0.2, 0.5, 0.8, 0.99})
        {
            const PairwiseContext ctx{rho, 1.0, snr, 1.0};
            const double p = pairwise_error_rayleigh(ctx);
            CHECK(p > 0.0);
            CHECK(p <= 0.5);
            CHECK(p > prev); // decreases as rho decreases
            prev = p;
            // printed closed form in terms of the mean-square arguments
            const auto [a2, b2] = pairwise_mean_square_arguments(ctx);
            const double d = b2 - a2;
            CHECK(p == Approx(0.5 - d / (4.0 * std::sqrt(1.0 + a2 + b2 + 0.25 * d * d))).epsilon(1e-9).margin(1e-15));
            CHECK(std::abs(p - oracle::pairwise_rayleigh_quadrature(rho, snr, 1.0, 1.0)) < 1e-6);
        }
    }
}

TEST_CASE("analysis - hypothesis correlation", "[analysis]")
{
    const BeamPatternMatrix b = BeamPatternMatrix::generate(2);
    CHECK(hypothesis_correlation(b, 0, 0, 0, 0) == Approx(1.0));
    CHECK(hypothesis_correlation(b, 0, 0, 1, 0) == Approx(1.0 / std::sqrt(2.0)));
    CHECK(hypothesis_correlation(b, 0, 0, 2, 0) == 0.0);
    CHECK(hypothesis_correlation(b, 1, 1, 0, 2) == Approx(0.5));
    CHECK_THROWS_AS(hypothesis_correlation(b, 3, 0, 0, 0), std::out_of_range);
}

TEST_CASE("analysis - union bound", "[analysis]")
{
    const BeamPatternMatrix b = BeamPatternMatrix::generate(2);

    SECTION("zero energy: every term is one half")
    {
        const BoundResult r = pcef_upper_bound(b, 3, 0.0, 1.0, 729.0);
        CHECK(r.unclamped_total == Approx(3.0 / 9.0 * (81.0 - 9.0) / 2.0));
        CHECK(r.total == 1.0);
        CHECK(r.clamped);
    }
    SECTION("noiseless limit")
    {
        const BoundResult r = pcef_upper_bound(b, 3, 1.0, 0.0, 729.0);
        CHECK(r.total == 0.0);
        CHECK_FALSE(r.clamped);
        CHECK(pcef_upper_bound(b, 3, 1.0, 1e-12, 729.0).total < 1e-9);
    }
    SECTION("structure")
    {
        const BoundResult r = pcef_upper_bound(b, 3, 1.0, 1.0, 729.0);
        REQUIRE(r.terms.rows() == 9);
        CHECK(r.terms.diagonal().isZero());
        CHECK(r.terms.maxCoeff() <= 0.5);
        CHECK(r.terms.minCoeff() >= 0.0);
        CHECK(r.per_stage == Approx(r.terms.sum() / 9.0));
        CHECK(r.unclamped_total == Approx(3.0 * r.per_stage));
        // term (true, other) uses rho of the pair
        const double rho = hypothesis_correlation(b, 0, 1, 1, 1);
        CHECK(r.terms(4, 1) == Approx(pairwise_error_rayleigh({rho, 1.0, 1.0, 729.0})));
        CHECK_THROWS_AS(pcef_upper_bound(b, 0, 1.0, 1.0, 1.0), std::invalid_argument);
    }
    SECTION("decreasing in energy")
    {
        double prev = std::numeric_limits<double>::infinity();
        for (double p = 1e-3; p < 1e3; p *= 2.0)
        {
            const double v = pcef_upper_bound(b, 3, p, 1.0, 729.0).unclamped_total;
            CHECK(v < prev);
            prev = v;
        }
    }
}
