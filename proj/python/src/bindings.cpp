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

#include "overbeam/analysis.hpp"
#include "overbeam/array_model.hpp"
#include "overbeam/codebook.hpp"
#include "overbeam/estimator.hpp"
#include "overbeam/montecarlo.hpp"
#include "overbeam/special_functions.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace overbeam;

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Overlapped beam-pattern channel estimation (C++ core)";
    m.attr("__version__") = OVERBEAM_VERSION;

    py::register_exception<SelfTermError>(m, "SelfTermError", PyExc_ValueError);

    py::enum_<GridKind>(m, "GridKind")
        .value("uniform_spatial_frequency", GridKind::uniform_spatial_frequency)
        .value("uniform_angle", GridKind::uniform_angle);
    py::enum_<Algorithm>(m, "Algorithm")
        .value("overlapped", Algorithm::overlapped)
        .value("non_overlapped", Algorithm::non_overlapped);
    py::enum_<AlphaEstimator>(m, "AlphaEstimator")
        .value("mmse_all_stages", AlphaEstimator::mmse_all_stages)
        .value("final_stage_only", AlphaEstimator::final_stage_only);

    // ---- array model ----
    py::class_<AngleGrid>(m, "AngleGrid")
        .def(py::init<std::size_t, GridKind>(), py::arg("n"), py::arg("kind") = GridKind::uniform_spatial_frequency)
        .def("__len__", &AngleGrid::size)
        .def_property_readonly("kind", &AngleGrid::kind)
        .def("angle", &AngleGrid::angle, py::arg("i"))
        .def("spatial_frequency", &AngleGrid::spatial_frequency, py::arg("i"))
        .def("steering", &AngleGrid::steering, py::arg("i"));
    m.def("steering_vector_from_frequency", &steering_vector_from_frequency, py::arg("psi"), py::arg("n"));

    py::class_<ChannelRealization>(m, "ChannelRealization")
        .def(py::init([](GridIndex theta, GridIndex phi, Complex alpha, std::size_t n) {
                 return ChannelRealization{theta, phi, alpha, n};
             }),
             py::arg("theta"), py::arg("phi"), py::arg("alpha"), py::arg("n"))
        .def_readwrite("theta", &ChannelRealization::theta)
        .def_readwrite("phi", &ChannelRealization::phi)
        .def_readwrite("alpha", &ChannelRealization::alpha)
        .def_readwrite("n", &ChannelRealization::n);

    // ---- codebook ----
    py::class_<BeamPatternMatrix>(m, "BeamPatternMatrix")
        .def(py::init<RMatrix>(), py::arg("amplitudes"))
        .def_static("generate", &BeamPatternMatrix::generate, py::arg("patterns"))
        .def_static("identity", &BeamPatternMatrix::identity, py::arg("subranges"))
        .def_property_readonly("patterns", &BeamPatternMatrix::patterns)
        .def_property_readonly("subranges", &BeamPatternMatrix::subranges)
        .def_property_readonly("matrix", &BeamPatternMatrix::matrix);

    // ---- estimator ----
    py::class_<StageMeasurement>(m, "StageMeasurement")
        .def_readonly("stage", &StageMeasurement::stage)
        .def_readonly("y", &StageMeasurement::y)
        .def_readonly("r", &StageMeasurement::r)
        .def_property_readonly("selected",
                               [](const StageMeasurement &s) { return py::make_tuple(s.selected.receive, s.selected.transmit); })
        .def_readonly("selected_value", &StageMeasurement::selected_value)
        .def_readonly("power", &StageMeasurement::power)
        .def_readonly("gain", &StageMeasurement::gain);

    py::class_<EstimationTrace>(m, "EstimationTrace")
        .def_readonly("algorithm", &EstimationTrace::algorithm)
        .def_readonly("alpha_estimator", &EstimationTrace::alpha_estimator)
        .def_readonly("stages", &EstimationTrace::stages)
        .def_readonly("phi_hat", &EstimationTrace::phi_hat)
        .def_readonly("theta_hat", &EstimationTrace::theta_hat)
        .def_readonly("alpha_hat", &EstimationTrace::alpha_hat)
        .def_readonly("powers", &EstimationTrace::powers)
        .def_readonly("total_energy", &EstimationTrace::total_energy)
        .def_readonly("slots", &EstimationTrace::slots);

    py::class_<Estimator>(m, "Estimator")
        .def(py::init<std::size_t, std::size_t, Algorithm, GridKind>(), py::arg("n"), py::arg("k"),
             py::arg("algorithm") = Algorithm::overlapped, py::arg("grid") = GridKind::uniform_spatial_frequency)
        .def_property_readonly("antennas", &Estimator::antennas)
        .def_property_readonly("subranges", &Estimator::subranges)
        .def_property_readonly("patterns", &Estimator::patterns)
        .def_property_readonly("stages", &Estimator::stages)
        .def_property_readonly("slots_per_trial", &Estimator::slots_per_trial)
        .def("energy_per_unit_power", &Estimator::energy_per_unit_power)
        .def(
            "run",
            [](const Estimator &e, const ChannelRealization &channel, double p_t, double n0, double var_alpha,
               AlphaEstimator alpha_estimator, std::uint64_t seed) {
                Rng rng(seed);
                py::gil_scoped_release release;
                return e.run(channel, {p_t, n0, var_alpha, alpha_estimator}, rng);
            },
            py::arg("channel"), py::arg("p_t"), py::arg("n0"), py::arg("var_alpha"),
            py::arg("alpha_estimator") = AlphaEstimator::mmse_all_stages, py::arg("seed") = 0);

    m.def("fuse_measurements", &fuse_measurements, py::arg("y"), py::arg("b"));
    m.def(
        "select_path",
        [](const CMatrix &r) {
            const PathIndex p = select_path(r);
            return py::make_tuple(p.receive, p.transmit);
        },
        py::arg("r"));
    m.def(
        "estimate_alpha_mmse",
        [](const std::vector<Complex> &r, double p_t, Complex x, double n0, double var_alpha) {
            return estimate_alpha_mmse(r, p_t, x, n0, var_alpha);
        },
        py::arg("r"), py::arg("p_t"), py::arg("x"), py::arg("n0"), py::arg("var_alpha"));
    m.def(
        "slot_counts",
        [](std::size_t n, std::size_t k) {
            return py::make_tuple(Estimator(n, k, Algorithm::overlapped).slots_per_trial(),
                                  Estimator(n, k, Algorithm::non_overlapped).slots_per_trial());
        },
        py::arg("n"), py::arg("k"), "(overlapped, baseline) measurement slots per estimate.");

    // ---- analysis ----
    m.def("bessel_i0", &bessel_i0, py::arg("z"));
    m.def("marcum_q1", &marcum_q1, py::arg("a"), py::arg("b"));

    py::class_<PairwiseContext>(m, "PairwiseContext")
        .def(py::init([](double rho, double n0, double p_t, double var_alpha) {
                 return PairwiseContext{rho, n0, p_t, var_alpha};
             }),
             py::arg("rho"), py::arg("n0") = 1.0, py::arg("p_t") = 1.0, py::arg("var_alpha") = 1.0)
        .def_readwrite("rho", &PairwiseContext::rho)
        .def_readwrite("n0", &PairwiseContext::n0)
        .def_readwrite("p_t", &PairwiseContext::p_t)
        .def_readwrite("var_alpha", &PairwiseContext::var_alpha);
    m.def(
        "pairwise_marcum_arguments",
        [](const PairwiseContext &ctx, double alpha_magnitude) {
            const MarcumArguments a = pairwise_marcum_arguments(ctx, alpha_magnitude);
            return py::make_tuple(a.a, a.b);
        },
        py::arg("ctx"), py::arg("alpha_magnitude"));
    m.def("pairwise_error_fixed_alpha", &pairwise_error_fixed_alpha, py::arg("ctx"), py::arg("alpha_magnitude"));
    m.def("pairwise_error_rayleigh", &pairwise_error_rayleigh, py::arg("ctx"));
    m.def("hypothesis_correlation", &hypothesis_correlation, py::arg("b"), py::arg("kr"), py::arg("kt"),
          py::arg("kr_true"), py::arg("kt_true"));

    py::class_<BoundResult>(m, "BoundResult")
        .def_readonly("stages", &BoundResult::stages)
        .def_readonly("per_stage", &BoundResult::per_stage)
        .def_readonly("unclamped_total", &BoundResult::unclamped_total)
        .def_readonly("total", &BoundResult::total)
        .def_readonly("clamped", &BoundResult::clamped)
        .def_readonly("terms", &BoundResult::terms);
    m.def("pcef_upper_bound", &pcef_upper_bound, py::arg("b"), py::arg("stages"), py::arg("p_t"), py::arg("n0"),
          py::arg("var_alpha"));

    // ---- Monte Carlo ----
    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("n", &ExperimentConfig::n)
        .def_readwrite("k", &ExperimentConfig::k)
        .def_readwrite("algorithms", &ExperimentConfig::algorithms)
        .def_readwrite("alpha_estimators", &ExperimentConfig::alpha_estimators)
        .def_readwrite("et_db", &ExperimentConfig::et_db)
        .def_readwrite("include_noiseless", &ExperimentConfig::include_noiseless)
        .def_readwrite("trials", &ExperimentConfig::trials)
        .def_readwrite("seed", &ExperimentConfig::seed)
        .def_readwrite("var_alpha", &ExperimentConfig::var_alpha)
        .def_readwrite("grid", &ExperimentConfig::grid)
        .def_readwrite("workers", &ExperimentConfig::workers)
        .def("prior_variance", &ExperimentConfig::prior_variance)
        .def("validate", &ExperimentConfig::validate);
    m.def("energy_grid", &energy_grid, py::arg("min_db"), py::arg("max_db"), py::arg("step_db"));
    m.def("sample_channel", &sample_channel, py::arg("cfg"), py::arg("trial"));
    m.def("failure_indicator", &failure_indicator, py::arg("trace"), py::arg("truth"));

    py::class_<ErrorStatistics>(m, "ErrorStatistics")
        .def_readonly("count", &ErrorStatistics::count)
        .def_readonly("mean", &ErrorStatistics::mean)
        .def_readonly("se", &ErrorStatistics::se);
    py::class_<AlphaErrorSummary>(m, "AlphaErrorSummary")
        .def_readonly("estimator", &AlphaErrorSummary::estimator)
        .def_readonly("all", &AlphaErrorSummary::all)
        .def_readonly("successful", &AlphaErrorSummary::successful);
    py::class_<SweepPoint>(m, "SweepPoint")
        .def_readonly("noiseless", &SweepPoint::noiseless)
        .def_readonly("et_db", &SweepPoint::et_db)
        .def_readonly("et", &SweepPoint::et)
        .def_readonly("p_t", &SweepPoint::p_t)
        .def_readonly("n0", &SweepPoint::n0)
        .def_readonly("trials", &SweepPoint::trials)
        .def_readonly("failures", &SweepPoint::failures)
        .def_readonly("pcef", &SweepPoint::pcef)
        .def_readonly("pcef_se", &SweepPoint::pcef_se)
        .def_readonly("ci_low", &SweepPoint::ci_low)
        .def_readonly("ci_high", &SweepPoint::ci_high)
        .def_readonly("low_count", &SweepPoint::low_count)
        .def_readonly("slots", &SweepPoint::slots)
        .def_readonly("alpha_errors", &SweepPoint::alpha_errors)
        .def("alpha_error", &SweepPoint::alpha_error, py::arg("estimator"), py::return_value_policy::reference_internal);
    py::class_<ResultTable>(m, "ResultTable")
        .def_readonly("algorithm", &ResultTable::algorithm)
        .def_readonly("slots_per_trial", &ResultTable::slots_per_trial)
        .def_readonly("energy_per_unit_power", &ResultTable::energy_per_unit_power)
        .def_readonly("points", &ResultTable::points);
    py::class_<SweepResult>(m, "SweepResult")
        .def_readonly("config", &SweepResult::config)
        .def_readonly("tables", &SweepResult::tables)
        .def("table", &SweepResult::table, py::arg("algorithm"), py::return_value_policy::reference_internal);
    m.def(
        "run_sweep",
        [](const ExperimentConfig &cfg) {
            py::gil_scoped_release release;
            return run_sweep(cfg);
        },
        py::arg("cfg"));
    m.def("energy_at_pcef", &energy_at_pcef, py::arg("table"), py::arg("target"));

    py::class_<BoundPoint>(m, "BoundPoint")
        .def_readonly("et_db", &BoundPoint::et_db)
        .def_readonly("zero_energy", &BoundPoint::zero_energy)
        .def_readonly("p_t", &BoundPoint::p_t)
        .def_readonly("bound", &BoundPoint::bound);
    py::class_<BoundCurve>(m, "BoundCurve")
        .def_readonly("n", &BoundCurve::n)
        .def_readonly("k", &BoundCurve::k)
        .def_readonly("energy_per_unit_power", &BoundCurve::energy_per_unit_power)
        .def_readonly("points", &BoundCurve::points);
    m.def("bound_curve", &bound_curve, py::arg("n"), py::arg("k"), py::arg("et_db"), py::arg("var_alpha"),
          py::arg("grid") = GridKind::uniform_spatial_frequency, py::arg("zero_energy") = false);
}
