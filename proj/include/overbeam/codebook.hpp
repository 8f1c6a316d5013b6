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

#ifndef OVERBEAM_CODEBOOK_HPP
#define OVERBEAM_CODEBOOK_HPP

#include "overbeam/array_model.hpp"

#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace overbeam
{

// Beam pattern description matrix: entry (m, k) is the amplitude of beam pattern m on angular
// sub-range k. Columns are unit-norm, nonnegative and nonzero.
class BeamPatternMatrix
{
public:
    explicit BeamPatternMatrix(RMatrix amplitudes);

    // All 2^M - 1 nonzero binary supports of length M, each normalized. Column k (0-based) is the
    // support of the reflected Gray code of K - k read with pattern 0 as the most significant
    // bit. For M = 2 this is [[1, 1/sqrt2, 0], [0, 1/sqrt2, 1]]. Valid for 1 <= M <= 16.
    static BeamPatternMatrix generate(std::size_t patterns);

    // K x K identity: one pattern per sub-range, no overlap.
    static BeamPatternMatrix identity(std::size_t subranges);

    std::size_t patterns() const { return static_cast<std::size_t>(b_.rows()); }
    std::size_t subranges() const { return static_cast<std::size_t>(b_.cols()); }
    double amplitude(std::size_t m, std::size_t k) const;
    const RMatrix &matrix() const { return b_; }

private:
    RMatrix b_;
};

// Contiguous run of grid indices [begin, end).
struct IndexRange
{
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const { return end - begin; }
    bool contains(std::size_t i) const { return i >= begin && i < end; }
    friend bool operator==(const IndexRange &, const IndexRange &) = default;
};

// Splits parent into k equal contiguous blocks in ascending order.
std::vector<IndexRange> split_range(IndexRange parent, std::size_t k);

struct SubrangePartition
{
    std::size_t stage = 1;
    std::vector<IndexRange> transmit;
    std::vector<IndexRange> receive;
};

SubrangePartition partition_subranges(IndexRange parent_transmit, IndexRange parent_receive, std::size_t k,
                                      std::size_t stage = 1);

// Desired beam amplitude over the grid for pattern m, before the gain constant: b(m, k) on the
// indices of ranges[k], zero elsewhere.
RVector target_profile(const BeamPatternMatrix &b, std::size_t m, std::span<const IndexRange> ranges,
                       std::size_t n);

class DegenerateDesignError : public std::runtime_error
{
public:
    DegenerateDesignError(const std::string &what, double condition)
        : std::runtime_error(what), condition_(condition)
    {
    }
    double condition() const { return condition_; }

private:
    double condition_;
};

// Array manifold U = [u(eps_0), ..., u(eps_{N-1})] of a grid, with the machinery to solve
// U^H v = g in the least-squares sense.
class ArrayManifold
{
public:
    // Condition estimates above this make synthesis throw DegenerateDesignError.
    static constexpr double max_condition = 1e12;

    explicit ArrayManifold(AngleGrid grid);

    const AngleGrid &grid() const { return grid_; }
    std::size_t size() const { return grid_.size(); }
    const CMatrix &matrix() const { return u_; }

    // True when the grid's steering vectors are orthonormal by construction.
    bool orthonormal() const { return orthonormal_; }

    // 1 for orthonormal grids, otherwise |R_00| / |R_nn| of a column-pivoted QR of U^H.
    double condition_estimate() const { return condition_; }

    // Minimum-norm least-squares solution of U^H v = g. Throws DegenerateDesignError when the
    // manifold is too ill-conditioned.
    CVector solve(const RVector &g) const;

    // Column-wise solve for several targets at once (one pass over U instead of one per column).
    CMatrix solve(const RMatrix &g) const;

    // U^H v: the array response of weight vector v at every grid angle.
    CVector response(const CVector &v) const { return u_.adjoint() * v; }
    CMatrix response(const CMatrix &v) const { return (v.adjoint() * u_).adjoint(); } // row form streams U once
    // Steering vectors of grid points [band.begin, band.end), one per column.
    auto steering_block(IndexRange band) const
    {
        return u_.middleCols(static_cast<Eigen::Index>(band.begin), static_cast<Eigen::Index>(band.size()));
    }
    // Response restricted to grid points [band.begin, band.end).
    CMatrix response(const CMatrix &v, IndexRange band) const { return (v.adjoint() * steering_block(band)).adjoint(); }

private:
    AngleGrid grid_;
    CMatrix u_;
    bool orthonormal_;
    double condition_ = 1.0;
    std::shared_ptr<const Eigen::ColPivHouseholderQR<CMatrix>> qr_;
};

struct SynthesizedBeam
{
    CVector weights;        // unit norm
    double gain = 0.0;      // realized constant C with U^H weights ~= C g
    double residual = 0.0;  // ||U^H weights - C g|| / ||C g||
    double condition = 1.0; // condition estimate of the manifold used
};

// Unit-norm vector whose beam pattern reproduces g up to the scalar it reports.
SynthesizedBeam synthesize_vector(const RVector &g, const ArrayManifold &manifold);

// The M beams of one link end for one stage.
struct BeamSet
{
    CMatrix vectors;           // N x M, unit columns
    std::vector<double> gains; // realized C per pattern
    double max_residual = 0.0;
    std::vector<IndexRange> ranges;
};

BeamSet synthesize_beams(const BeamPatternMatrix &b, std::span<const IndexRange> ranges,
                         const ArrayManifold &manifold);

struct StageCodebook
{
    std::size_t stage = 1;
    CMatrix f; // beamforming vectors, N x M
    CMatrix w; // combining vectors, N x M
    double gain = 0.0;        // common constant C_s: geometric mean of the per-pattern constants
    double gain_spread = 0.0; // max/min of the per-pattern constants, minus one
    double max_residual = 0.0;
    SubrangePartition partition;
};

StageCodebook make_stage_codebook(std::size_t stage, const BeamSet &transmit, const BeamSet &receive);

StageCodebook build_stage_codebook(const BeamPatternMatrix &b, const SubrangePartition &partition,
                                   const ArrayManifold &manifold);

struct GainFlatness
{
    double max_in_range_error = 0.0; // max | |u^H v| - C b | / C over covered grid angles
    double max_out_of_range = 0.0;   // max |u^H v| / C over uncovered grid angles
};

// Realized beam amplitude vs. the target C * b(m, k) for every pattern of one end.
GainFlatness gain_flatness(const CMatrix &vectors, double gain, const BeamPatternMatrix &b,
                           std::span<const IndexRange> ranges, const ArrayManifold &manifold);

// Beams for every (stage, parent block) of a hierarchical search with N = K^S. Entries are
// synthesized on first use and then shared; safe to use from several threads.
class CodebookBank
{
public:
    CodebookBank(std::shared_ptr<const ArrayManifold> manifold, BeamPatternMatrix b);

    std::size_t stages() const { return stages_; }
    std::size_t subranges() const { return b_.subranges(); }
    const BeamPatternMatrix &patterns() const { return b_; }
    const ArrayManifold &manifold() const { return *manifold_; }

    // Grid range of a parent block at a stage (1-based stage, block < K^(stage-1)).
    IndexRange parent_range(std::size_t stage, std::size_t block) const;

    const BeamSet &beams(std::size_t stage, std::size_t block) const;

private:
    struct Slot
    {
        std::once_flag once;
        std::optional<BeamSet> beams;
    };

    std::shared_ptr<const ArrayManifold> manifold_;
    BeamPatternMatrix b_;
    std::size_t stages_ = 0;
    std::vector<std::size_t> stage_offset_;
    std::unique_ptr<Slot[]> slots_;
};

// Exact number of stages S with N = K^S; throws std::invalid_argument otherwise.
std::size_t exact_stage_count(std::size_t n, std::size_t k);

} // namespace overbeam

#endif
