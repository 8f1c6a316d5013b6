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

#ifndef OVERBEAM_RNG_HPP
#define OVERBEAM_RNG_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>

namespace overbeam
{

// Independent sub-streams of one Monte Carlo trial.
enum class Stream : std::uint32_t
{
    channel = 1,
    noise = 2,
};

// Seedable 64-bit Mersenne Twister with a deterministic split rule.
//
// A trial stream is keyed by (master_seed, trial_index, stream) through std::seed_seq, whose
// mixing algorithm is fixed by the standard, so trial streams do not depend on execution order.
class Rng
{
public:
    explicit Rng(std::uint64_t seed);

    static Rng for_trial(std::uint64_t master_seed, std::uint64_t trial_index, Stream stream);

    // Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    std::complex<double> complex_gaussian(double variance);

    // Uniform integer in [0, n).
    std::size_t uniform_index(std::size_t n);

    std::mt19937_64 &engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace overbeam

#endif
