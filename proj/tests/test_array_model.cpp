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

#include "overbeam/array_model.hpp"
#include "overbeam/codebook.hpp"

#include <cmath>
#include <numbers>

using namespace overbeam;
using Catch::Approx;

TEST_CASE("array_model - steering vector", "[array_model]")
{
    const std::size_t n = 8;
    const double eps = 0.3;
    const CVector u = steering_vector(eps, n);
    REQUIRE(u.size() == 8);
    CHECK(u.norm() == Approx(1.0).epsilon(1e-14));
    for (std::size_t k = 0; k < n; ++k)
    {
        const Complex want = std::polar(1.0 / std::sqrt(8.0), std::numbers::pi * k * std::sin(eps));
        CHECK(std::abs(u(static_cast<Eigen::Index>(k)) - want) < 1e-15);
    }
    // broadside: all entries equal
    const CVector b = steering_vector(0.0, n);
    CHECK((b.array() - b(0)).abs().maxCoeff() < 1e-15);
    CHECK_THROWS_AS(steering_vector(0.1, 0), std::invalid_argument);
}

TEST_CASE("array_model - default grid is unitary", "[array_model]")
{
    for (std::size_t n : {3u, 27u, 49u})
    {
        const AngleGrid grid(n);
        for (std::size_t i = 1; i < n; ++i)
        {
            CHECK(grid.angle(i) > grid.angle(i - 1));
            CHECK(grid.angle(i) > -std::numbers::pi / 2);
            CHECK(grid.angle(i) < std::numbers::pi / 2);
        }
        CMatrix u(n, n);
        for (std::size_t i = 0; i < n; ++i)
            u.col(static_cast<Eigen::Index>(i)) = grid.steering(i);
        const CMatrix gram = u.adjoint() * u;
        CHECK((gram - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
        // the steering vector at the grid angle is the same one
        CHECK((steering_vector(grid.angle(n / 2), n) - grid.steering(n / 2)).norm() < 1e-12);
    }
    CHECK_THROWS_AS(AngleGrid(0), std::invalid_argument);
    CHECK_THROWS_AS(AngleGrid(5).angle(5), std::out_of_range);
}

TEST_CASE("array_model - uniform-angle grid is degenerate", "[array_model]")
{
    const std::size_t n = 27;
    const AngleGrid grid(n, GridKind::uniform_angle);
    CHECK(grid.angle(3) == Approx(std::numbers::pi * 3 / 27));
    // u(eps_i) == u(eps_{N-i}): sin is symmetric about pi/2
    CHECK((grid.steering(4) - grid.steering(n - 4)).norm() < 1e-12);
    const ArrayManifold manifold(grid);
    CHECK_FALSE(manifold.orthonormal());
    CHECK(manifold.condition_estimate() > ArrayManifold::max_condition);
    RVector g = RVector::Zero(n);
    g.head(9).setOnes();
    CHECK_THROWS_AS(manifold.solve(g), DegenerateDesignError);
}

TEST_CASE("array_model - channel", "[array_model]")
{
    const AngleGrid grid(9);
    const ChannelRealization ch{2, 7, {0.5, -1.5}, 9};
    const CMatrix h = build_channel(ch, grid);
    const CMatrix want = ch.alpha * grid.steering(2) * grid.steering(7).adjoint();
    CHECK((h - want).norm() < 1e-14);
    Eigen::JacobiSVD<CMatrix> svd(h);
    CHECK(svd.singularValues()(1) < 1e-12);
    CHECK(svd.singularValues()(0) == Approx(std::abs(ch.alpha)));
    CHECK_THROWS_AS(build_channel({9, 0, {1, 0}, 9}, grid), std::invalid_argument);
    CHECK_THROWS_AS(build_channel({0, 0, {1, 0}, 8}, grid), std::invalid_argument);
}

TEST_CASE("array_model - measurement block", "[array_model]")
{
    const std::size_t n = 9;
    const AngleGrid grid(n);
    const ChannelRealization ch{1, 5, {0.8, 0.6}, n};
    const CMatrix h = build_channel(ch, grid);
    CMatrix f(n, 2), w(n, 2);
    f << grid.steering(5), grid.steering(0);
    w << grid.steering(1), (grid.steering(2) + grid.steering(3)) / std::sqrt(2.0);
    const double p = 4.0;
    const Complex x{0.0, 1.0};

    SECTION("noiseless equals sqrt(p) W^H H F x")
    {
        Rng rng(1);
        const CMatrix y = measure_block(h, f, w, p, x, 0.0, rng);
        CHECK((y - std::sqrt(p) * w.adjoint() * h * f * x).norm() < 1e-13);
        // steered at the path: |y(0,0)| = sqrt(p) |alpha|
        CHECK(std::abs(y(0, 0)) == Approx(2.0));
    }
    SECTION("rank-one shortcut agrees with the dense model")
    {
        Rng a(42), b(42);
        const CMatrix dense = measure_block(h, f, w, p, x, 0.7, a);
        const CMatrix fast = measure_block(ch, grid, f, w, p, x, 0.7, b);
        CHECK((dense - fast).norm() < 1e-12);
        const CMatrix seeded = measure_block(h, f, w, p, x, MeasurementNoise{0.7, 42});
        CHECK((dense - seeded).norm() == 0.0);
    }
    SECTION("noise variance per slot")
    {
        Rng rng(3);
        double acc = 0.0;
        const int reps = 20000;
        for (int r = 0; r < reps; ++r)
        {
            const CMatrix y = measure_block(ch, grid, f, w, p, x, 2.0, rng) - std::sqrt(p) * w.adjoint() * h * f * x;
            acc += y.squaredNorm();
        }
        CHECK(acc / (4.0 * reps) == Approx(2.0).epsilon(0.02));
    }
    SECTION("validation")
    {
        Rng rng(1);
        CHECK_THROWS_AS(measure_block(h, 2.0 * f, w, p, x, 0.0, rng), std::invalid_argument);
        CHECK_THROWS_AS(measure_block(h, f, w, 0.0, x, 0.0, rng), std::invalid_argument);
        CHECK_THROWS_AS(measure_block(h, f, w, p, Complex{2.0, 0.0}, 0.0, rng), std::invalid_argument);
        CHECK_THROWS_AS(measure_block(h, f, w, p, x, -1.0, rng), std::invalid_argument);
        CHECK_THROWS_AS(measure_block(h, f, w.leftCols(1), p, x, 0.0, rng), std::invalid_argument);
    }
}

TEST_CASE("array_model - rng streams", "[array_model]")
{
    Rng a = Rng::for_trial(5, 10, Stream::channel);
    Rng b = Rng::for_trial(5, 10, Stream::channel);
    Rng c = Rng::for_trial(5, 10, Stream::noise);
    Rng d = Rng::for_trial(5, 11, Stream::channel);
    const Complex za = a.complex_gaussian(1.0);
    CHECK(za == b.complex_gaussian(1.0));
    CHECK(za != c.complex_gaussian(1.0));
    CHECK(za != d.complex_gaussian(1.0));
    CHECK_THROWS_AS(a.uniform_index(0), std::invalid_argument);
    CHECK_THROWS_AS(a.complex_gaussian(-1.0), std::invalid_argument);
}
