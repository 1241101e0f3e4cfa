// SPDX-License-Identifier: Apache-2.0
#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tfatom/errors.hpp"
#include "tfatom/gabor.hpp"
#include "tfatom/signals.hpp"
#include "tfatom/solvers.hpp"
#include "tfatom/tfr.hpp"
#include "tfatom/toeplitz.hpp"
#include "tfatom/types.hpp"

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace py = pybind11;
using namespace tfatom;

PYBIND11_MODULE(_tfatom, m) {
    m.doc() = "sparse off-grid time-frequency analysis (atomic-norm and grid baselines)";

    py::register_exception<FrameError>(m, "FrameError");
    py::register_exception<DecompositionError>(m, "DecompositionError");

    py::enum_<WindowKind>(m, "WindowKind")
        .value("rectangular", WindowKind::rectangular)
        .value("hann", WindowKind::hann)
        .value("slepian", WindowKind::slepian);

    py::enum_<TestSignalKind>(m, "TestSignalKind")
        .value("sinusoid", TestSignalKind::sinusoid)
        .value("linear_chirp", TestSignalKind::linear_chirp)
        .value("quadratic_chirp", TestSignalKind::quadratic_chirp)
        .value("mixture", TestSignalKind::mixture);

    py::enum_<FreqMethod>(m, "FreqMethod")
        .value("matrix_pencil", FreqMethod::matrix_pencil)
        .value("prony", FreqMethod::prony);

    py::class_<Signal>(m, "Signal")
        .def(py::init([](const Eigen::VectorXcd& samples, std::optional<double> sample_rate) {
                 Signal s;
                 s.samples = samples;
                 s.sample_rate = sample_rate;
                 return s;
             }),
             py::arg("samples"), py::arg("sample_rate") = py::none())
        .def_readwrite("samples", &Signal::samples)
        .def_readwrite("sample_rate", &Signal::sample_rate)
        .def("__len__", &Signal::length);

    py::class_<Tone>(m, "Tone")
        .def(py::init([](double f0, double rate, double rate2, double amplitude) {
                 return Tone{f0, rate, rate2, amplitude};
             }),
             py::arg("f0") = 0.0, py::arg("rate") = 0.0, py::arg("rate2") = 0.0,
             py::arg("amplitude") = 1.0)
        .def_readwrite("f0", &Tone::f0)
        .def_readwrite("rate", &Tone::rate)
        .def_readwrite("rate2", &Tone::rate2)
        .def_readwrite("amplitude", &Tone::amplitude);

    py::class_<Window>(m, "Window")
        .def_readonly("taps", &Window::taps)
        .def_readonly("kind", &Window::kind)
        .def("__len__", &Window::length);

    py::class_<GaborFrame>(m, "GaborFrame")
        .def_readonly("window", &GaborFrame::window)
        .def_readonly("hop", &GaborFrame::hop)
        .def_readonly("channels", &GaborFrame::channels)
        .def_readonly("signal_length", &GaborFrame::signal_length)
        .def_readonly("coverage", &GaborFrame::coverage)
        .def_property_readonly("support", &GaborFrame::support)
        .def_property_readonly("shifts", &GaborFrame::shifts);

    py::class_<AdmmOptions>(m, "AdmmOptions")
        .def(py::init<>())
        .def_readwrite("rho", &AdmmOptions::rho)
        .def_readwrite("max_iters", &AdmmOptions::max_iters)
        .def_readwrite("primal_tol", &AdmmOptions::primal_tol)
        .def_readwrite("dual_tol", &AdmmOptions::dual_tol)
        .def_readwrite("threads", &AdmmOptions::threads)
        .def_readwrite("seed", &AdmmOptions::seed);

    py::class_<ResidualTrace>(m, "ResidualTrace")
        .def_readonly("primal", &ResidualTrace::primal)
        .def_readonly("dual", &ResidualTrace::dual)
        .def_readonly("objective", &ResidualTrace::objective);

    py::class_<AdmmState>(m, "AdmmState")
        .def(py::init<>())
        .def_readwrite("z", &AdmmState::z)
        .def_readwrite("lambda_", &AdmmState::lambda);

    py::class_<AnmSolution>(m, "AnmSolution")
        .def_readonly("x", &AnmSolution::x)
        .def_readonly("u", &AnmSolution::u)
        .def_readonly("nu", &AnmSolution::nu)
        .def_readonly("objective", &AnmSolution::objective)
        .def_readonly("iterations", &AnmSolution::iterations)
        .def_readonly("converged", &AnmSolution::converged)
        .def_readonly("trace", &AnmSolution::trace)
        .def_readonly("max_constraint_violation", &AnmSolution::max_constraint_violation)
        .def_readonly("min_final_eigenvalue", &AnmSolution::min_final_eigenvalue)
        .def_readonly("max_final_eigenvalue", &AnmSolution::max_final_eigenvalue);

    py::class_<L1Solution>(m, "L1Solution")
        .def_readonly("coefficients", &L1Solution::coefficients)
        .def_readonly("objective", &L1Solution::objective)
        .def_readonly("iterations", &L1Solution::iterations)
        .def_readonly("converged", &L1Solution::converged)
        .def_readonly("trace", &L1Solution::trace)
        .def_readonly("constraint_residual", &L1Solution::constraint_residual);

    py::class_<AtomEstimate>(m, "AtomEstimate")
        .def_readonly("omega", &AtomEstimate::omega)
        .def_readonly("power", &AtomEstimate::power)
        .def_readonly("coefficient", &AtomEstimate::coefficient)
        .def_readonly("power_adjusted", &AtomEstimate::power_adjusted);

    py::class_<CoefficientFit>(m, "CoefficientFit")
        .def_readonly("atoms", &CoefficientFit::atoms)
        .def_readonly("residual", &CoefficientFit::residual);

    py::class_<SparseAtom>(m, "SparseAtom")
        .def_readonly("shift", &SparseAtom::shift)
        .def_readonly("omega", &SparseAtom::omega)
        .def_readonly("coefficient", &SparseAtom::coefficient);

    py::class_<SparseTF>(m, "SparseTF")
        .def_readonly("atoms", &SparseTF::atoms)
        .def_readonly("hop", &SparseTF::hop)
        .def_readonly("channels", &SparseTF::channels)
        .def_readonly("signal_length", &SparseTF::signal_length);

    py::class_<ExtractionIssue>(m, "ExtractionIssue")
        .def_readonly("shift", &ExtractionIssue::shift)
        .def_readonly("message", &ExtractionIssue::message);

    // signals
    m.def("synth_tones", &synth_tones, py::arg("length"), py::arg("tones"));
    m.def("default_components", &default_components, py::arg("kind"), py::arg("length"));
    m.def(
        "gen_test_signal",
        [](TestSignalKind kind, index_t length, std::optional<Tone> component) {
            return component ? gen_test_signal(kind, length, *component)
                             : gen_test_signal(kind, length);
        },
        py::arg("kind"), py::arg("length"), py::arg("component") = py::none());
    m.def("rectangular_window", &rectangular_window, py::arg("length"));
    m.def("hann_window", &hann_window, py::arg("length"));
    m.def("slepian_window", &slepian_window, py::arg("length"), py::arg("half_bandwidth"));
    m.def("make_window", &make_window, py::arg("kind"), py::arg("length"),
          py::arg("half_bandwidth") = 0.0);

    // gabor
    m.def("make_frame", &make_frame, py::arg("window"), py::arg("hop"), py::arg("channels"),
          py::arg("signal_length"));
    m.def("dgt", py::overload_cast<const Signal&, const GaborFrame&>(&dgt), py::arg("f"),
          py::arg("frame"));
    m.def("dgt",
          py::overload_cast<const Signal&, const GaborFrame&, const Window&>(&dgt),
          py::arg("f"), py::arg("frame"), py::arg("analysis_window"));
    m.def("idgt", &idgt, py::arg("c"), py::arg("frame"));
    m.def("canonical_dual", &canonical_dual, py::arg("frame"));
    m.def("synthesis_windowed", &synthesis_windowed, py::arg("x"), py::arg("frame"));
    m.def("analysis_stack",
          py::overload_cast<const Signal&, const GaborFrame&>(&analysis_stack), py::arg("f"),
          py::arg("frame"));
    m.def("analysis_stack",
          py::overload_cast<const Signal&, const GaborFrame&, const Window&>(&analysis_stack),
          py::arg("f"), py::arg("frame"), py::arg("analysis_window"));
    m.def("project_reconstruction", &project_reconstruction, py::arg("v"), py::arg("f"),
          py::arg("frame"));

    // toeplitz
    m.def("toeplitz_build", &toeplitz_build, py::arg("u"));
    m.def("toeplitz_pinv", &toeplitz_pinv, py::arg("x"));
    m.def("psd_project", &psd_project, py::arg("x"));
    m.def("vandermonde_decompose", &vandermonde_decompose, py::arg("u"),
          py::arg("rank_tol") = 1e-6, py::arg("method") = FreqMethod::matrix_pencil);
    m.def("solve_coefficients", &solve_coefficients, py::arg("atoms"), py::arg("x"));

    // solvers
    m.def("solve_l1_bp", &solve_l1_bp, py::arg("f"), py::arg("frame"),
          py::arg("opts") = AdmmOptions{});
    m.def("solve_windowwise_anm", &solve_windowwise_anm, py::arg("f"), py::arg("frame"),
          py::arg("opts") = AdmmOptions{});
    m.def("solve_joint_anm",
          py::overload_cast<const Signal&, const GaborFrame&, const AdmmOptions&>(
              &solve_joint_anm),
          py::arg("f"), py::arg("frame"), py::arg("opts") = AdmmOptions{});
    m.def("solve_joint_anm",
          py::overload_cast<const Signal&, const GaborFrame&, const AdmmOptions&,
                            const AdmmState&>(&solve_joint_anm),
          py::arg("f"), py::arg("frame"), py::arg("opts"), py::arg("init"));

    // tfr
    m.def(
        "extract_sparse_tf",
        [](const AnmSolution& sol, const GaborFrame& frame, double rank_tol,
           FreqMethod method) {
            std::vector<ExtractionIssue> issues;
            SparseTF tf = extract_sparse_tf(sol, frame, rank_tol, method, &issues);
            return py::make_tuple(tf, issues);
        },
        py::arg("sol"), py::arg("frame"), py::arg("rank_tol") = 1e-6,
        py::arg("method") = FreqMethod::matrix_pencil);
    m.def("grid_to_sparse", &grid_to_sparse, py::arg("c"), py::arg("frame"),
          py::arg("threshold") = 0.0);
    m.def("rasterize", &rasterize, py::arg("tf"), py::arg("freq_bins") = 1024,
          py::arg("db_floor") = -80.0);
    m.def("energy_curve", &energy_curve, py::arg("tf"));
    m.def("reconstruction_error", &reconstruction_error, py::arg("tf"), py::arg("f"),
          py::arg("frame"));

#ifdef VERSION_INFO
    m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
    m.attr("__version__") = "dev";
#endif
}
