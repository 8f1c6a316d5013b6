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

#ifndef OVERBEAM_IO_HPP
#define OVERBEAM_IO_HPP

#include "overbeam/montecarlo.hpp"

#include <cstdint>
#include <ostream>
#include <span>
#include <string>

namespace overbeam
{

// Shortest round-trip decimal ("%.17g"); "inf", "-inf", "nan" for non-finite values.
std::string format_real(double v);

// "re+imj" / "re-imj", both parts as format_real.
std::string format_complex(Complex z);

// Column layout of every table is documented in the README. All tables are comma separated with a
// single header row.

// algorithm,et_db,et,p_t,n0,trials,failures,pcef,pcef_se,ci_low,ci_high,low_count,slots
void write_pcef_table(std::ostream &os, const ResultTable &table);

// algorithm,alpha_estimator,et_db,pcef,n_all,rel_err_all,rel_err_all_se,n_success,rel_err_success,
// rel_err_success_se
void write_alpha_error_table(std::ostream &os, const ResultTable &table, AlphaEstimator estimator);

// et_db, then per curve: p_t_k<K>_n<N>,bound_k<K>_n<N>,unclamped_k<K>_n<N>,clamped_k<K>_n<N>.
// All curves must share the same energy grid.
void write_bound_curves(std::ostream &os, std::span<const BoundCurve> curves);

struct SlotRow
{
    std::size_t k = 0;
    std::size_t n = 0;
    std::size_t stages = 0;
    std::size_t overlapped = 0;
    std::size_t baseline = 0;
};

// k,n,stages,overlapped_slots,baseline_slots
void write_slot_table(std::ostream &os, std::span<const SlotRow> rows);

// pattern,k_0,...,k_{K-1}
void write_pattern_matrix(std::ostream &os, const BeamPatternMatrix &b);

// antenna,v_0,...,v_{M-1}; complex entries
void write_beam_vectors(std::ostream &os, const CMatrix &vectors);

// One JSON object per line describing a complete estimation trace and its ground truth.
void write_trace_jsonl(std::ostream &os, std::uint64_t trial, const ChannelRealization &truth,
                       const EstimationTrace &trace, bool failed);

} // namespace overbeam

#endif
