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

#include "overbeam/codebook.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

namespace overbeam
{

// ---- Beam pattern description matrix ----------------------------------------------------------

BeamPatternMatrix::BeamPatternMatrix(RMatrix amplitudes) : b_(std::move(amplitudes))
{
    if (b_.rows() == 0 || b_.cols() == 0)
        throw std::invalid_argument("Beam pattern matrix cannot be empty.");
    if ((b_.array() < 0.0).any() || !b_.allFinite())
        throw std::invalid_argument("Beam pattern amplitudes must be finite and nonnegative.");
    for (Eigen::Index k = 0; k < b_.cols(); ++k)
        if (std::abs(b_.col(k).norm() - 1.0) > 1e-12)
            throw std::invalid_argument("Beam pattern matrix columns must have unit norm.");
    for (Eigen::Index m = 0; m < b_.rows(); ++m)
        if (b_.row(m).maxCoeff() == 0.0)
            throw std::invalid_argument("Beam pattern " + std::to_string(m) + " covers no sub-range.");
}

BeamPatternMatrix BeamPatternMatrix::generate(std::size_t patterns)
{
    if (patterns == 0 || patterns > 16)
        throw std::invalid_argument("Number of beam patterns must lie in [1, 16].");
    const std::size_t k_count = (std::size_t{1} << patterns) - 1;
    RMatrix b = RMatrix::Zero(static_cast<Eigen::Index>(patterns), static_cast<Eigen::Index>(k_count));
    for (std::size_t k = 0; k < k_count; ++k)
    {
        const std::size_t code = k_count - k;
        const std::size_t support = code ^ (code >> 1);
        const auto weight = static_cast<double>(std::popcount(support));
        for (std::size_t m = 0; m < patterns; ++m)
            if ((support >> (patterns - 1 - m)) & 1u)
                b(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k)) = 1.0 / std::sqrt(weight);
    }
    return BeamPatternMatrix(std::move(b));
}

BeamPatternMatrix BeamPatternMatrix::identity(std::size_t subranges)
{
    if (subranges == 0)
        throw std::invalid_argument("Number of sub-ranges must be positive.");
    const auto k = static_cast<Eigen::Index>(subranges);
    return BeamPatternMatrix(RMatrix::Identity(k, k));
}

double BeamPatternMatrix::amplitude(std::size_t m, std::size_t k) const
{
    if (m >= patterns() || k >= subranges())
        throw std::out_of_range("Beam pattern index out of range.");
    return b_(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k));
}

// ---- Sub-range partitioning -------------------------------------------------------------------

std::vector<IndexRange> split_range(IndexRange parent, std::size_t k)
{
    if (k == 0)
        throw std::invalid_argument("Cannot split a range into zero parts.");
    if (parent.end < parent.begin || parent.size() == 0 || parent.size() % k != 0)
        throw std::invalid_argument("Parent range of size " + std::to_string(parent.size()) +
                                    " is not divisible into " + std::to_string(k) + " equal blocks.");
    const std::size_t width = parent.size() / k;
    std::vector<IndexRange> blocks(k);
    for (std::size_t i = 0; i < k; ++i)
        blocks[i] = {parent.begin + i * width, parent.begin + (i + 1) * width};
    return blocks;
}

SubrangePartition partition_subranges(IndexRange parent_transmit, IndexRange parent_receive, std::size_t k,
                                      std::size_t stage)
{
    return {stage, split_range(parent_transmit, k), split_range(parent_receive, k)};
}

RVector target_profile(const BeamPatternMatrix &b, std::size_t m, std::span<const IndexRange> ranges,
                       std::size_t n)
{
    if (m >= b.patterns())
        throw std::out_of_range("Beam pattern index out of range.");
    if (ranges.size() != b.subranges())
        throw std::invalid_argument("Need exactly one index range per sub-range.");

    RVector g = RVector::Zero(static_cast<Eigen::Index>(n));
    std::vector<bool> covered(n, false);
    for (std::size_t k = 0; k < ranges.size(); ++k)
    {
        if (ranges[k].end > n || ranges[k].end < ranges[k].begin)
            throw std::invalid_argument("Sub-range exceeds the angle grid.");
        for (std::size_t i = ranges[k].begin; i < ranges[k].end; ++i)
        {
            if (covered[i])
                throw std::invalid_argument("Sub-ranges overlap at grid index " + std::to_string(i) + ".");
            covered[i] = true;
            g(static_cast<Eigen::Index>(i)) = b.amplitude(m, k);
        }
    }
    if (g.maxCoeff() == 0.0)
        throw std::invalid_argument("Target beam profile is identically zero.");
    return g;
}

// ---- Array manifold and synthesis -------------------------------------------------------------

ArrayManifold::ArrayManifold(AngleGrid grid)
    : grid_(grid), orthonormal_(grid.kind() == GridKind::uniform_spatial_frequency)
{
    const auto n = static_cast<Eigen::Index>(grid_.size());
    u_.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        u_.col(i) = grid_.steering(static_cast<GridIndex>(i));

    if (orthonormal_)
        return;

    auto qr = std::make_shared<Eigen::ColPivHouseholderQR<CMatrix>>(u_.adjoint());
    const auto &r = qr->matrixQR();
    const double head = std::abs(r(0, 0));
    const double tail = std::abs(r(n - 1, n - 1));
    condition_ = tail > 0.0 ? head / tail : std::numeric_limits<double>::infinity();
    qr_ = std::move(qr);
}

CVector ArrayManifold::solve(const RVector &g) const
{
    return solve(RMatrix(g)).col(0);
}

CMatrix ArrayManifold::solve(const RMatrix &g) const
{
    if (g.rows() != u_.rows())
        throw std::invalid_argument("Target profile length does not match the antenna count.");
    if (condition_ > max_condition)
        throw DegenerateDesignError("Array manifold is numerically singular (condition estimate " +
                                        std::to_string(condition_) + "); cannot synthesize beam patterns.",
                                    condition_);
    if (orthonormal_)
    {
        // U^H U = I, so V = U G; only the rows of G between its first and last nonzero contribute.
        Eigen::Index lo = 0, hi = g.rows();
        while (lo < hi && g.row(lo).isZero(0.0))
            ++lo;
        while (hi > lo && g.row(hi - 1).isZero(0.0))
            --hi;
        if (lo == hi)
            return CMatrix::Zero(u_.rows(), g.cols());
        return u_.middleCols(lo, hi - lo) * g.middleRows(lo, hi - lo);
    }
    return qr_->solve(g.cast<Complex>());
}

SynthesizedBeam synthesize_vector(const RVector &g, const ArrayManifold &manifold)
{
    if (g.size() != static_cast<Eigen::Index>(manifold.size()))
        throw std::invalid_argument("Target profile length does not match the antenna count.");
    const double g_norm = g.norm();
    if (!(g_norm > 0.0))
        throw std::invalid_argument("Target beam profile is identically zero.");

    CVector v = manifold.solve(g);
    const double v_norm = v.norm();
    if (!(v_norm > 0.0) || !std::isfinite(v_norm))
        throw DegenerateDesignError("Beam synthesis produced a degenerate weight vector.",
                                    manifold.condition_estimate());

    SynthesizedBeam beam;
    beam.gain = 1.0 / v_norm;
    beam.weights = v * beam.gain;
    const CVector scaled_target = (beam.gain * g).cast<Complex>();
    beam.residual = (manifold.response(beam.weights) - scaled_target).norm() / (beam.gain * g_norm);
    beam.condition = manifold.condition_estimate();
    return beam;
}

BeamSet synthesize_beams(const BeamPatternMatrix &b, std::span<const IndexRange> ranges,
                         const ArrayManifold &manifold)
{
    const std::size_t n = manifold.size();
    const auto m_count = static_cast<Eigen::Index>(b.patterns());
    RMatrix targets(static_cast<Eigen::Index>(n), m_count);
    for (Eigen::Index m = 0; m < m_count; ++m)
        targets.col(m) = target_profile(b, static_cast<std::size_t>(m), ranges, n);

    // Same arithmetic as synthesize_vector, batched over the patterns.
    BeamSet set;
    set.ranges.assign(ranges.begin(), ranges.end());
    set.vectors = manifold.solve(targets);
    for (Eigen::Index m = 0; m < m_count; ++m)
    {
        const double v_norm = set.vectors.col(m).norm();
        if (!(v_norm > 0.0) || !std::isfinite(v_norm))
            throw DegenerateDesignError("Beam synthesis produced a degenerate weight vector.",
                                        manifold.condition_estimate());
        set.gains.push_back(1.0 / v_norm);
        set.vectors.col(m) /= v_norm;
    }
    if (manifold.orthonormal())
    {
        // Unitary U: the response outside the band has the norm of v's component orthogonal to
        // the band's steering vectors, so only the band's columns are touched.
        IndexRange band{n, 0};
        for (const auto &r : ranges)
            band = {std::min(band.begin, r.begin), std::max(band.end, r.end)};
        const auto lo = static_cast<Eigen::Index>(band.begin);
        const auto width = static_cast<Eigen::Index>(band.size());
        const CMatrix inside = manifold.response(set.vectors, band);
        const bool whole_grid = band.size() == n; // then nothing lies outside the band
        const CMatrix outside =
            whole_grid ? CMatrix() : CMatrix(set.vectors - manifold.steering_block(band) * inside);
        for (Eigen::Index m = 0; m < m_count; ++m)
        {
            const double c = set.gains[static_cast<std::size_t>(m)];
            const RVector t = c * targets.col(m).segment(lo, width);
            const double in_err = (inside.col(m) - t.cast<Complex>()).squaredNorm();
            const double out_energy = whole_grid ? 0.0 : outside.col(m).squaredNorm();
            const double residual = std::sqrt(in_err + out_energy) / t.norm();
            set.max_residual = std::max(set.max_residual, residual);
        }
        return set;
    }
    const CMatrix response = manifold.response(set.vectors);
    for (Eigen::Index m = 0; m < m_count; ++m)
    {
        const double c = set.gains[static_cast<std::size_t>(m)];
        const double residual =
            (response.col(m) - (c * targets.col(m)).cast<Complex>()).norm() / (c * targets.col(m).norm());
        set.max_residual = std::max(set.max_residual, residual);
    }
    return set;
}

StageCodebook make_stage_codebook(std::size_t stage, const BeamSet &transmit, const BeamSet &receive)
{
    StageCodebook cb;
    cb.stage = stage;
    cb.f = transmit.vectors;
    cb.w = receive.vectors;
    cb.partition = {stage, transmit.ranges, receive.ranges};
    cb.max_residual = std::max(transmit.max_residual, receive.max_residual);

    double log_sum = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    std::size_t count = 0;
    for (const auto *set : {&transmit, &receive})
        for (double c : set->gains)
        {
            log_sum += std::log(c);
            lo = std::min(lo, c);
            hi = std::max(hi, c);
            ++count;
        }
    cb.gain = std::exp(log_sum / static_cast<double>(count));
    cb.gain_spread = hi / lo - 1.0;
    return cb;
}

StageCodebook build_stage_codebook(const BeamPatternMatrix &b, const SubrangePartition &partition,
                                   const ArrayManifold &manifold)
{
    const BeamSet transmit = synthesize_beams(b, partition.transmit, manifold);
    const BeamSet receive = synthesize_beams(b, partition.receive, manifold);
    return make_stage_codebook(partition.stage, transmit, receive);
}

GainFlatness gain_flatness(const CMatrix &vectors, double gain, const BeamPatternMatrix &b,
                           std::span<const IndexRange> ranges, const ArrayManifold &manifold)
{
    if (ranges.size() != b.subranges() || static_cast<std::size_t>(vectors.cols()) != b.patterns())
        throw std::invalid_argument("Beam vectors, pattern matrix and sub-ranges are inconsistent.");
    GainFlatness report;
    for (std::size_t m = 0; m < b.patterns(); ++m)
    {
        const CVector response = manifold.response(CVector(vectors.col(static_cast<Eigen::Index>(m))));
        for (std::size_t i = 0; i < manifold.size(); ++i)
        {
            const double realized = std::abs(response(static_cast<Eigen::Index>(i)));
            const auto k = std::find_if(ranges.begin(), ranges.end(),
                                        [i](const IndexRange &r) { return r.contains(i); });
            if (k == ranges.end())
                report.max_out_of_range = std::max(report.max_out_of_range, realized / gain);
            else
            {
                const double target = gain * b.amplitude(m, static_cast<std::size_t>(k - ranges.begin()));
                report.max_in_range_error = std::max(report.max_in_range_error, std::abs(realized - target) / gain);
            }
        }
    }
    return report;
}

// ---- Codebook bank ----------------------------------------------------------------------------

std::size_t exact_stage_count(std::size_t n, std::size_t k)
{
    if (k < 2)
        throw std::invalid_argument("Number of sub-ranges per stage must be at least 2.");
    std::size_t stages = 0;
    std::size_t size = 1;
    while (size < n)
    {
        if (size > std::numeric_limits<std::size_t>::max() / k)
            break;
        size *= k;
        ++stages;
    }
    if (size != n || stages == 0)
        throw std::invalid_argument("Antenna count " + std::to_string(n) + " is not a positive power of K = " +
                                    std::to_string(k) + ".");
    return stages;
}

CodebookBank::CodebookBank(std::shared_ptr<const ArrayManifold> manifold, BeamPatternMatrix b)
    : manifold_(std::move(manifold)), b_(std::move(b))
{
    if (!manifold_)
        throw std::invalid_argument("Codebook bank needs an array manifold.");
    stages_ = exact_stage_count(manifold_->size(), b_.subranges());
    std::size_t total = 0;
    std::size_t blocks = 1;
    for (std::size_t s = 0; s < stages_; ++s)
    {
        stage_offset_.push_back(total);
        total += blocks;
        blocks *= b_.subranges();
    }
    slots_ = std::make_unique<Slot[]>(total);
}

IndexRange CodebookBank::parent_range(std::size_t stage, std::size_t block) const
{
    if (stage == 0 || stage > stages_)
        throw std::out_of_range("Stage index out of range.");
    std::size_t width = manifold_->size();
    std::size_t blocks = 1;
    for (std::size_t s = 1; s < stage; ++s)
    {
        width /= b_.subranges();
        blocks *= b_.subranges();
    }
    if (block >= blocks)
        throw std::out_of_range("Parent block index out of range.");
    return {block * width, (block + 1) * width};
}

const BeamSet &CodebookBank::beams(std::size_t stage, std::size_t block) const
{
    const IndexRange parent = parent_range(stage, block);
    Slot &slot = slots_[stage_offset_[stage - 1] + block];
    std::call_once(slot.once, [&] {
        const auto ranges = split_range(parent, b_.subranges());
        slot.beams.emplace(synthesize_beams(b_, ranges, *manifold_));
    });
    return *slot.beams;
}

} // namespace overbeam
