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

#include "overbeam/array_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace overbeam
{

std::string_view to_string(GridKind kind)
{
    switch (kind)
    {
    case GridKind::uniform_spatial_frequency:
        return "spatial";
    case GridKind::uniform_angle:
        return "angle";
    }
    return "unknown";
}

GridKind grid_kind_from_string(std::string_view name)
{
    if (name == "spatial")
        return GridKind::uniform_spatial_frequency;
    if (name == "angle")
        return GridKind::uniform_angle;
    throw std::invalid_argument("Unknown grid kind '" + std::string(name) + "' (expected spatial or angle).");
}

AngleGrid::AngleGrid(std::size_t n, GridKind kind) : n_(n), kind_(kind)
{
    if (n == 0)
        throw std::invalid_argument("Antenna count must be positive.");
}

double AngleGrid::angle(GridIndex i) const
{
    if (i >= n_)
        throw std::out_of_range("Grid index out of range.");
    if (kind_ == GridKind::uniform_angle)
        return std::numbers::pi * static_cast<double>(i) / static_cast<double>(n_);
    return std::asin(spatial_frequency(i));
}

double AngleGrid::spatial_frequency(GridIndex i) const
{
    if (i >= n_)
        throw std::out_of_range("Grid index out of range.");
    if (kind_ == GridKind::uniform_angle)
        return std::sin(angle(i));
    const auto n = static_cast<double>(n_);
    return (2.0 * static_cast<double>(i) + 1.0 - n) / n;
}

CVector AngleGrid::steering(GridIndex i) const
{
    return steering_vector_from_frequency(spatial_frequency(i), n_);
}

CVector steering_vector_from_frequency(double psi, std::size_t n)
{
    if (n == 0)
        throw std::invalid_argument("Antenna count must be positive.");
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    CVector u(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k)
        u(static_cast<Eigen::Index>(k)) = std::polar(scale, std::numbers::pi * static_cast<double>(k) * psi);
    return u;
}

CVector steering_vector(double epsilon, std::size_t n)
{
    return steering_vector_from_frequency(std::sin(epsilon), n);
}

CMatrix build_channel(const ChannelRealization &channel, const AngleGrid &grid)
{
    if (channel.n != grid.size())
        throw std::invalid_argument("Channel antenna count does not match the grid.");
    if (!grid.contains(channel.theta) || !grid.contains(channel.phi))
        throw std::invalid_argument("Channel angle index lies outside the grid.");
    return channel.alpha * grid.steering(channel.theta) * grid.steering(channel.phi).adjoint();
}

namespace
{

void check_unit_columns(const CMatrix &m, const char *what)
{
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        if (std::abs(m.col(c).norm() - 1.0) > 1e-9)
            throw std::invalid_argument(std::string(what) + " columns must have unit norm.");
}

void check_block_inputs(Eigen::Index n, const CMatrix &f, const CMatrix &w, double p, Complex x, double n0)
{
    if (f.rows() != n || w.rows() != n)
        throw std::invalid_argument("Beamforming/combining vectors do not match the antenna count.");
    if (f.cols() != w.cols())
        throw std::invalid_argument("Transmit and receive ends must use the same number of beam patterns.");
    if (!(p > 0.0))
        throw std::invalid_argument("Transmit power must be positive.");
    if (std::abs(std::abs(x) - 1.0) > 1e-9)
        throw std::invalid_argument("Pilot symbol must have unit modulus.");
    if (n0 < 0.0)
        throw std::invalid_argument("Noise variance cannot be negative.");
    check_unit_columns(f, "Beamforming");
    check_unit_columns(w, "Combining");
}

void add_noise(CMatrix &y, double n0, Rng &rng)
{
    for (Eigen::Index m = 0; m < y.cols(); ++m)
        for (Eigen::Index n = 0; n < y.rows(); ++n)
            y(n, m) += rng.complex_gaussian(n0);
}

} // namespace

CMatrix measure_block(const CMatrix &h, const CMatrix &f, const CMatrix &w, double p, Complex x,
                      double n0, Rng &rng)
{
    if (h.rows() != h.cols())
        throw std::invalid_argument("Channel matrix must be square.");
    check_block_inputs(h.rows(), f, w, p, x, n0);
    CMatrix y = (std::sqrt(p) * x) * (w.adjoint() * h * f);
    add_noise(y, n0, rng);
    return y;
}

CMatrix measure_block(const CMatrix &h, const CMatrix &f, const CMatrix &w, double p, Complex x,
                      const MeasurementNoise &noise)
{
    Rng rng(noise.seed);
    return measure_block(h, f, w, p, x, noise.n0, rng);
}

CMatrix measure_block(const ChannelRealization &channel, const AngleGrid &grid, const CMatrix &f,
                      const CMatrix &w, double p, Complex x, double n0, Rng &rng)
{
    if (channel.n != grid.size())
        throw std::invalid_argument("Channel antenna count does not match the grid.");
    if (!grid.contains(channel.theta) || !grid.contains(channel.phi))
        throw std::invalid_argument("Channel angle index lies outside the grid.");
    check_block_inputs(static_cast<Eigen::Index>(grid.size()), f, w, p, x, n0);

    // W^H H F = alpha (W^H u(theta)) (u(phi)^H F)
    const CVector rx = w.adjoint() * grid.steering(channel.theta);
    const CVector tx = f.adjoint() * grid.steering(channel.phi); // conj of u(phi)^H F
    CMatrix y = (std::sqrt(p) * x * channel.alpha) * (rx * tx.adjoint());
    add_noise(y, n0, rng);
    return y;
}

} // namespace overbeam
