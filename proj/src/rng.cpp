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

#include "overbeam/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace overbeam
{

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

Rng Rng::for_trial(std::uint64_t master_seed, std::uint64_t trial_index, Stream stream)
{
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed & 0xffffffffu),
                      static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(trial_index & 0xffffffffu),
                      static_cast<std::uint32_t>(trial_index >> 32),
                      static_cast<std::uint32_t>(stream)};
    Rng rng(0);
    rng.engine_.seed(seq);
    return rng;
}

std::complex<double> Rng::complex_gaussian(double variance)
{
    if (variance < 0.0)
        throw std::invalid_argument("Noise variance cannot be negative.");
    const double scale = std::sqrt(0.5 * variance);
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    return {scale * re, scale * im};
}

std::size_t Rng::uniform_index(std::size_t n)
{
    if (n == 0)
        throw std::invalid_argument("Cannot draw an index from an empty range.");
    std::uniform_int_distribution<std::size_t> dist(0, n - 1);
    return dist(engine_);
}

} // namespace overbeam
