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

#ifndef OVERBEAM_ARRAY_MODEL_HPP
#define OVERBEAM_ARRAY_MODEL_HPP

#include "overbeam/rng.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace overbeam
{

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

// Angles are carried as grid indices; radians are derived on demand.
using GridIndex = std::size_t;

// How the N candidate angles are laid out.
//
// uniform_spatial_frequency: sin(eps_i) = (2i + 1 - N) / N, eps_i in (-pi/2, pi/2). The steering
//     vectors of the grid are orthonormal, so the array manifold U is unitary.
// uniform_angle: eps_i = pi * i / N on [0, pi). Because sin(eps_i) == sin(eps_{N-i}) the
//     manifold has repeated columns; kept for comparison, codebook synthesis rejects it.
enum class GridKind
{
    uniform_spatial_frequency,
    uniform_angle,
};

std::string_view to_string(GridKind kind);
GridKind grid_kind_from_string(std::string_view name);

class AngleGrid
{
public:
    AngleGrid(std::size_t n, GridKind kind = GridKind::uniform_spatial_frequency);

    std::size_t size() const { return n_; }
    GridKind kind() const { return kind_; }
    bool contains(GridIndex i) const { return i < n_; }

    // Angle of grid point i in radians. Throws std::out_of_range for i >= N.
    double angle(GridIndex i) const;

    // sin(angle(i)), computed without the round trip through asin.
    double spatial_frequency(GridIndex i) const;

    // u(eps_i).
    CVector steering(GridIndex i) const;

private:
    std::size_t n_;
    GridKind kind_;
};

// u(eps) = 1/sqrt(N) [1, e^{j pi sin(eps)}, ..., e^{j pi (N-1) sin(eps)}]^T
CVector steering_vector(double epsilon, std::size_t n);

// Same array response, parameterized directly by the spatial frequency psi = sin(eps).
CVector steering_vector_from_frequency(double psi, std::size_t n);

struct ChannelRealization
{
    GridIndex theta = 0; // AOA (receive) grid index
    GridIndex phi = 0;   // AOD (transmit) grid index
    Complex alpha{0.0, 0.0};
    std::size_t n = 1;
};

// H = alpha * u(theta) * u(phi)^H. Throws std::invalid_argument for off-grid indices.
CMatrix build_channel(const ChannelRealization &channel, const AngleGrid &grid);

struct MeasurementNoise
{
    double n0 = 0.0;        // variance per complex sample
    std::uint64_t seed = 0; // used only by the seed-taking overload
};

// Y = sqrt(p) W^H H F x + Q for N x M beamforming matrix F and N x M combining matrix W.
// Every Y(n, m) is one time slot and draws its own noise sample of variance n0. Slots are drawn in
// the order the transmitter steps through f_m and the receiver through w_n (m outer, n inner).
CMatrix measure_block(const CMatrix &h, const CMatrix &f, const CMatrix &w, double p, Complex x,
                      double n0, Rng &rng);

CMatrix measure_block(const CMatrix &h, const CMatrix &f, const CMatrix &w, double p, Complex x,
                      const MeasurementNoise &noise);

// Rank-one shortcut used by the estimators: the channel is never materialized.
// For the same rng state it draws the same noise samples as the dense overload applied to
// build_channel(channel, grid); the signal part agrees to rounding.
CMatrix measure_block(const ChannelRealization &channel, const AngleGrid &grid, const CMatrix &f,
                      const CMatrix &w, double p, Complex x, double n0, Rng &rng);

} // namespace overbeam

#endif
