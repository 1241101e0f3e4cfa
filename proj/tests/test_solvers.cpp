// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "tfatom/errors.hpp"
#include "tfatom/gabor.hpp"
#include "tfatom/signals.hpp"
#include "tfatom/solvers.hpp"
#include "tfatom/toeplitz.hpp"

using namespace tfatom;

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

Signal pure_tone(double omega, double amp, index_t L) {
    Signal f;
    f.samples.resize(L);
    for (index_t l = 0; l < L; ++l)
        f.samples[l] = amp * std::polar(1.0, two_pi * omega * static_cast<double>(l));
    return f;
}

Signal zero_signal(index_t L) {
    Signal f;
    f.samples = Eigen::VectorXcd::Zero(L);
    return f;
}

bool traces_identical(const ResidualTrace& a, const ResidualTrace& b) {
    if (a.primal.size() != b.primal.size())
        return false;
    for (std::size_t i = 0; i < a.primal.size(); ++i)
        if (a.primal[i] != b.primal[i] || a.dual[i] != b.dual[i] ||
            a.objective[i] != b.objective[i])
            return false;
    return true;
}
} // namespace

TEST_CASE("solver options are validated") {
    const GaborFrame fr = make_frame(rectangular_window(4), 4, 4, 8);
    const Signal f = zero_signal(8);
    AdmmOptions bad;
    bad.rho = 0.0;
    CHECK_THROWS_AS(solve_joint_anm(f, fr, bad), std::invalid_argument);
    CHECK_THROWS_AS(solve_windowwise_anm(f, fr, bad), std::invalid_argument);
    CHECK_THROWS_AS(solve_l1_bp(f, fr, bad), std::invalid_argument);
    bad.rho = 1.0;
    bad.max_iters = 0;
    CHECK_THROWS_AS(solve_joint_anm(f, fr, bad), std::invalid_argument);

    const Signal wrong = zero_signal(16);
    CHECK_THROWS_AS(solve_joint_anm(wrong, fr, AdmmOptions{}), FrameError);
    CHECK_THROWS_AS(solve_l1_bp(wrong, fr, AdmmOptions{}), FrameError);
}

TEST_CASE("zero signal yields the zero solution from every solver") {
    const GaborFrame fr = make_frame(hann_window(8), 4, 8, 32);
    const Signal f = zero_signal(32);
    AdmmOptions opts;
    opts.max_iters = 50;

    const AnmSolution joint = solve_joint_anm(f, fr, opts);
    CHECK(joint.converged);
    CHECK(joint.x.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(joint.objective) < 1e-12);

    const AnmSolution ww = solve_windowwise_anm(f, fr, opts);
    CHECK(ww.converged);
    CHECK(ww.x.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(ww.objective) < 1e-12);

    const L1Solution l1 = solve_l1_bp(f, fr, opts);
    CHECK(l1.converged);
    CHECK(l1.coefficients.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(l1.objective == 0.0);
}

TEST_CASE("single-shift full-support tone reaches the amplitude objective") {
    // One rectangular full-length block: the minimum objective for a lone
    // unit-power-per-sample tone of amplitude 2 is exactly 2.
    const index_t L = 32;
    const GaborFrame fr = make_frame(rectangular_window(L), L, L, L);
    const Signal f = pure_tone(0.123, 2.0, L);
    AdmmOptions opts;
    opts.rho = 0.5;
    opts.max_iters = 3000;
    opts.primal_tol = 1e-12; // run the full budget
    opts.dual_tol = 1e-12;
    const AnmSolution sol = solve_windowwise_anm(f, fr, opts);
    CHECK(std::abs(sol.objective - 2.0) < 2e-3);
    // the pinned block is the signal itself on a full-support rectangle
    CHECK((sol.x.col(0) - f.samples).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("decomposing the solved generator recovers the tone frequency") {
    const index_t L = 16;
    const GaborFrame fr = make_frame(rectangular_window(L), L, L, L);
    const Signal f = pure_tone(0.3, 1.3, L);
    AdmmOptions opts;
    opts.rho = 0.5;
    opts.max_iters = 2500;
    opts.primal_tol = 1e-12;
    opts.dual_tol = 1e-12;
    const AnmSolution sol = solve_windowwise_anm(f, fr, opts);
    const auto atoms = vandermonde_decompose(sol.u.col(0), 1e-2);
    REQUIRE(atoms.size() == 1);
    double d = std::abs(atoms[0].omega - 0.3);
    d = std::min(d, 1.0 - d);
    CHECK(d < 1e-3);
}

TEST_CASE("joint and windowed solvers agree on a single full-support shift") {
    // With one shift and a never-zero window the coupling constraint pins the
    // block exactly, so both solvers walk the same trajectory.
    const index_t L = 24;
    const GaborFrame fr = make_frame(rectangular_window(L), L, L, L);
    const Signal f = pure_tone(0.21, 1.0, L);
    AdmmOptions opts;
    opts.rho = 0.5;
    opts.max_iters = 1200;
    opts.primal_tol = 1e-12;
    opts.dual_tol = 1e-12;
    const AnmSolution a = solve_joint_anm(f, fr, opts);
    const AnmSolution b = solve_windowwise_anm(f, fr, opts);
    CHECK(std::abs(a.objective - b.objective) < 1e-6 * std::max(1.0, std::abs(b.objective)));
}

TEST_CASE("joint iterates stay feasible and the consensus blocks end semidefinite") {
    const index_t L = 64;
    const GaborFrame fr = make_frame(slepian_window(8, 0.1), 4, 16, L);
    const Signal f = gen_test_signal(TestSignalKind::mixture, L);
    AdmmOptions opts;
    opts.max_iters = 300;
    opts.primal_tol = 1e-12;
    opts.dual_tol = 1e-12;
    const AnmSolution sol = solve_joint_anm(f, fr, opts);

    CHECK(sol.max_constraint_violation < 1e-10);
    CHECK(sol.iterations == 300);
    CHECK(sol.trace.primal.size() == 300);
    CHECK(sol.trace.dual.size() == 300);
    CHECK(sol.trace.objective.size() == 300);
    CHECK(std::isfinite(sol.objective));
    CHECK(sol.nu.minCoeff() > -1e-9);
    CHECK(sol.min_final_eigenvalue > -1e-9 * std::max(1.0, sol.max_final_eigenvalue));

    // the solution synthesizes back to f
    const Signal rec = synthesis_windowed(sol.x, fr);
    CHECK((rec.samples - f.samples).norm() < 1e-10 * f.samples.norm());
}

TEST_CASE("runs are bitwise deterministic across repeats and thread counts") {
    const index_t L = 64;
    const GaborFrame fr = make_frame(slepian_window(8, 0.1), 4, 16, L);
    const Signal f = gen_test_signal(TestSignalKind::mixture, L);
    AdmmOptions opts;
    opts.max_iters = 120;

    const AnmSolution base = solve_joint_anm(f, fr, opts);
    const AnmSolution again = solve_joint_anm(f, fr, opts);
    CHECK(traces_identical(base.trace, again.trace));
    CHECK((base.x - again.x).cwiseAbs().maxCoeff() == 0.0);

    for (int threads : {2, 4, 8}) {
        AdmmOptions t = opts;
        t.threads = threads;
        const AnmSolution sol = solve_joint_anm(f, fr, t);
        CHECK(traces_identical(base.trace, sol.trace));
        CHECK((base.x - sol.x).cwiseAbs().maxCoeff() == 0.0);
        CHECK((base.u - sol.u).cwiseAbs().maxCoeff() == 0.0);
    }

    const AnmSolution w1 = solve_windowwise_anm(f, fr, opts);
    AdmmOptions t4 = opts;
    t4.threads = 4;
    const AnmSolution w2 = solve_windowwise_anm(f, fr, t4);
    CHECK(traces_identical(w1.trace, w2.trace));
}

TEST_CASE("explicit zero state reproduces the default run") {
    const index_t L = 32;
    const GaborFrame fr = make_frame(hann_window(8), 4, 8, L);
    const Signal f = gen_test_signal(TestSignalKind::sinusoid, L);
    AdmmOptions opts;
    opts.max_iters = 100;

    const index_t D = fr.support() + 1;
    AdmmState state;
    state.z.assign(static_cast<std::size_t>(fr.shifts()), Eigen::MatrixXcd::Zero(D, D));
    state.lambda.assign(static_cast<std::size_t>(fr.shifts()), Eigen::MatrixXcd::Zero(D, D));

    const AnmSolution a = solve_joint_anm(f, fr, opts);
    const AnmSolution b = solve_joint_anm(f, fr, opts, state);
    CHECK(traces_identical(a.trace, b.trace));

    AdmmState bad = state;
    bad.z.pop_back();
    CHECK_THROWS_AS(solve_joint_anm(f, fr, opts, bad), std::invalid_argument);
    AdmmState bad2 = state;
    bad2.lambda[0] = Eigen::MatrixXcd::Zero(D - 1, D - 1);
    CHECK_THROWS_AS(solve_joint_anm(f, fr, opts, bad2), std::invalid_argument);
}

TEST_CASE("objective settles rather than oscillating near convergence") {
    const index_t L = 32;
    const GaborFrame fr = make_frame(rectangular_window(L), L, L, L);
    const Signal f = pure_tone(0.123, 2.0, L);
    AdmmOptions opts;
    opts.rho = 0.5;
    opts.max_iters = 2000;
    opts.primal_tol = 1e-12;
    opts.dual_tol = 1e-12;
    const AnmSolution sol = solve_windowwise_anm(f, fr, opts);
    const auto& obj = sol.trace.objective;
    REQUIRE(obj.size() >= 200);
    for (std::size_t k = obj.size() - 100; k < obj.size(); ++k) {
        const double step = std::abs(obj[k] - obj[k - 1]);
        CHECK(step < 1e-4 * std::max(1.0, std::abs(obj[k])));
    }
}

TEST_CASE("grid basis pursuit returns a feasible certificate no worse than seeds") {
    const index_t L = 32, a = 4, M = 8, J = 8;
    const GaborFrame fr = make_frame(hann_window(J), a, M, L);

    // seed a one-coefficient synthesis
    GridCoefficients c0 = GridCoefficients::Zero(M * fr.shifts());
    c0[3 + 2 * M] = cplx(2.5, -1.0);
    const Signal f = idgt(c0, fr);

    AdmmOptions opts;
    opts.max_iters = 4000;
    const L1Solution sol = solve_l1_bp(f, fr, opts);
    CHECK(sol.constraint_residual < 1e-8);
    CHECK(sol.objective <= std::abs(c0[3 + 2 * M]) + 1e-4);
    const Signal rec = idgt(sol.coefficients, fr);
    CHECK((rec.samples - f.samples).norm() < 1e-8 * f.samples.norm());
}

TEST_CASE("grid basis pursuit beats the dual-window analysis certificate") {
    const index_t L = 64, a = 4, M = 16, J = 8;
    const GaborFrame fr = make_frame(slepian_window(J, 0.1), a, M, L);
    const Signal f = gen_test_signal(TestSignalKind::mixture, L);

    const GridCoefficients seed = dgt(f, fr, canonical_dual(fr));
    const double seed_l1 = seed.cwiseAbs().sum();

    AdmmOptions opts;
    opts.max_iters = 5000;
    const L1Solution sol = solve_l1_bp(f, fr, opts);
    CHECK(sol.constraint_residual < 1e-8);
    CHECK(sol.objective <= seed_l1 + 1e-6 * std::max(1.0, seed_l1));
}

TEST_CASE("basis pursuit reports non-convergence on a tiny budget") {
    const index_t L = 64, a = 4, M = 16, J = 8;
    const GaborFrame fr = make_frame(slepian_window(J, 0.1), a, M, L);
    const Signal f = gen_test_signal(TestSignalKind::mixture, L);
    AdmmOptions opts;
    opts.max_iters = 3;
    const L1Solution sol = solve_l1_bp(f, fr, opts);
    CHECK_FALSE(sol.converged);
    CHECK(sol.iterations == 3);
    CHECK(sol.trace.size() == 3);
    // the returned iterate is still projected onto the constraint
    CHECK(sol.constraint_residual < 1e-10);
}

TEST_CASE("basis pursuit requires block-diagonal channels") {
    const GaborFrame fr = make_frame(rectangular_window(8), 2, 4, 16); // J > M
    const Signal f = zero_signal(16);
    CHECK_THROWS_AS(solve_l1_bp(f, fr, AdmmOptions{}), FrameError);
}
