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

#ifndef OVERBEAM_SPECIAL_FUNCTIONS_HPP
#define OVERBEAM_SPECIAL_FUNCTIONS_HPP

#include <cstddef>
#include <vector>

namespace overbeam
{

// Modified Bessel function of the first kind, order 0. Throws std::range_error for |z| > 700.
double bessel_i0(double z);

// e^{-|z|} I0(z); finite for every finite z.
double bessel_i0_scaled(double z);

// e^{-z} I_k(z) for k = 0..kmax, z >= 0, by normalized backward recurrence.
std::vector<double> bessel_i_scaled_sequence(double z, std::size_t kmax);

// First-order Marcum Q function Q1(a, b) = int_b^inf x exp(-(x^2 + a^2)/2) I0(a x) dx.
// Throws std::invalid_argument for negative or non-finite arguments.
double marcum_q1(double a, double b);

} // namespace overbeam

#endif
