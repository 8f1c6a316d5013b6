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

#include "overbeam/io.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace overbeam
{

std::string format_real(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    if (v == 0.0)
        v = 0.0; // no "-0"
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_complex(Complex z)
{
    const double im = z.imag();
    std::string s = format_real(z.real());
    if (std::signbit(im) && im != 0.0)
        s += "-" + format_real(-im);
    else
        s += "+" + format_real(im);
    return s + "j";
}

namespace
{

std::string energy_label(const SweepPoint &p)
{
    return p.noiseless ? "inf" : format_real(p.et_db);
}

} // namespace

void write_pcef_table(std::ostream &os, const ResultTable &table)
{
    os << "algorithm,et_db,et,p_t,n0,trials,failures,pcef,pcef_se,ci_low,ci_high,low_count,slots\n";
    for (const auto &p : table.points)
        os << to_string(table.algorithm) << ',' << energy_label(p) << ',' << format_real(p.et) << ','
           << format_real(p.p_t) << ',' << format_real(p.n0) << ',' << p.trials << ',' << p.failures << ','
           << format_real(p.pcef) << ',' << format_real(p.pcef_se) << ',' << format_real(p.ci_low) << ','
           << format_real(p.ci_high) << ',' << (p.low_count ? 1 : 0) << ',' << p.slots << '\n';
}

void write_alpha_error_table(std::ostream &os, const ResultTable &table, AlphaEstimator estimator)
{
    os << "algorithm,alpha_estimator,et_db,pcef,n_all,rel_err_all,rel_err_all_se,n_success,rel_err_success,"
          "rel_err_success_se\n";
    for (const auto &p : table.points)
    {
        const AlphaErrorSummary &e = p.alpha_error(estimator);
        os << to_string(table.algorithm) << ',' << to_string(estimator) << ',' << energy_label(p) << ','
           << format_real(p.pcef) << ',' << e.all.count << ',' << format_real(e.all.mean) << ','
           << format_real(e.all.se) << ',' << e.successful.count << ','
           << (e.successful.count ? format_real(e.successful.mean) : "nan") << ','
           << format_real(e.successful.se) << '\n';
    }
}

void write_bound_curves(std::ostream &os, std::span<const BoundCurve> curves)
{
    if (curves.empty())
        throw std::invalid_argument("No bound curves to write.");
    const std::size_t rows = curves.front().points.size();
    for (const auto &c : curves)
        if (c.points.size() != rows)
            throw std::invalid_argument("Bound curves must share one energy grid.");

    os << "et_db";
    for (const auto &c : curves)
    {
        const std::string tag = "_k" + std::to_string(c.k) + "_n" + std::to_string(c.n);
        os << ",p_t" << tag << ",bound" << tag << ",unclamped" << tag << ",clamped" << tag;
    }
    os << '\n';
    for (std::size_t i = 0; i < rows; ++i)
    {
        const BoundPoint &first = curves.front().points[i];
        os << (first.zero_energy ? "-inf" : format_real(first.et_db));
        for (const auto &c : curves)
        {
            const BoundPoint &p = c.points[i];
            if (p.zero_energy != first.zero_energy || p.et_db != first.et_db)
                throw std::invalid_argument("Bound curves must share one energy grid.");
            os << ',' << format_real(p.p_t) << ',' << format_real(p.bound.total) << ','
               << format_real(p.bound.unclamped_total) << ',' << (p.bound.clamped ? 1 : 0);
        }
        os << '\n';
    }
}

void write_slot_table(std::ostream &os, std::span<const SlotRow> rows)
{
    os << "k,n,stages,overlapped_slots,baseline_slots\n";
    for (const auto &r : rows)
        os << r.k << ',' << r.n << ',' << r.stages << ',' << r.overlapped << ',' << r.baseline << '\n';
}

void write_pattern_matrix(std::ostream &os, const BeamPatternMatrix &b)
{
    os << "pattern";
    for (std::size_t k = 0; k < b.subranges(); ++k)
        os << ",k_" << k;
    os << '\n';
    for (std::size_t m = 0; m < b.patterns(); ++m)
    {
        os << m;
        for (std::size_t k = 0; k < b.subranges(); ++k)
            os << ',' << format_real(b.amplitude(m, k));
        os << '\n';
    }
}

void write_beam_vectors(std::ostream &os, const CMatrix &vectors)
{
    os << "antenna";
    for (Eigen::Index m = 0; m < vectors.cols(); ++m)
        os << ",v_" << m;
    os << '\n';
    for (Eigen::Index i = 0; i < vectors.rows(); ++i)
    {
        os << i;
        for (Eigen::Index m = 0; m < vectors.cols(); ++m)
            os << ',' << format_complex(vectors(i, m));
        os << '\n';
    }
}

namespace
{

nlohmann::json matrix_json(const CMatrix &a)
{
    auto rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i)
    {
        auto row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            row.push_back(format_complex(a(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

nlohmann::json range_json(const IndexRange &r)
{
    return {r.begin, r.end};
}

} // namespace

void write_trace_jsonl(std::ostream &os, std::uint64_t trial, const ChannelRealization &truth,
                       const EstimationTrace &trace, bool failed)
{
    nlohmann::json j;
    j["trial"] = trial;
    j["algorithm"] = std::string(to_string(trace.algorithm));
    j["alpha_estimator"] = std::string(to_string(trace.alpha_estimator));
    j["truth"] = {{"theta", truth.theta}, {"phi", truth.phi}, {"alpha", format_complex(truth.alpha)}};
    j["theta_hat"] = trace.theta_hat;
    j["phi_hat"] = trace.phi_hat;
    j["alpha_hat"] = format_complex(trace.alpha_hat);
    j["failed"] = failed;
    j["total_energy"] = trace.total_energy;
    j["slots"] = trace.slots;
    auto stages = nlohmann::json::array();
    for (const auto &s : trace.stages)
        stages.push_back({{"stage", s.stage},
                          {"power", s.power},
                          {"gain", s.gain},
                          {"y", matrix_json(s.y)},
                          {"r", matrix_json(s.r)},
                          {"selected", {{"receive", s.selected.receive}, {"transmit", s.selected.transmit}}},
                          {"selected_value", format_complex(s.selected_value)},
                          {"transmit_range", range_json(s.transmit_range)},
                          {"receive_range", range_json(s.receive_range)}});
    j["stages"] = std::move(stages);
    os << j.dump() << '\n';
}

} // namespace overbeam
