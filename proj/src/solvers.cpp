// SPDX-License-Identifier: Apache-2.0
#include "tfatom/solvers.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "tfatom/errors.hpp"
#include "tfatom/toeplitz.hpp"

namespace tfatom {

namespace {

// Deterministic parallel map: every index writes disjoint state, so the
// schedule cannot change results; only wall time depends on `threads`.
void parallel_for(index_t count, int threads, const std::function<void(index_t)>& body) {
    index_t workers = std::min<index_t>(std::max(threads, 1), count);
    if (workers <= 1) {
        for (index_t i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::atomic<index_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (index_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            try {
                for (index_t i = next.fetch_add(1); i < count; i = next.fetch_add(1))
                    body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                next.store(count); // stop the other workers early
            }
        });
    }
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

void check_options(const AdmmOptions& opts) {
    if (!(opts.rho > 0.0))
        throw std::invalid_argument("rho must be positive");
    if (opts.max_iters < 1)
        throw std::invalid_argument("max_iters must be >= 1");
}

double default_tol(const GaborFrame& frame) {
    return 1e-7 * static_cast<double>(frame.shifts()) *
           static_cast<double>(frame.support() + 1);
}

// One ADMM on per-shift (J+1)x(J+1) lifted blocks; the two ANM variants
// differ only in how the block estimates x are updated from the consensus
// point q = z_x - lambda_x / rho.
AnmSolution run_block_admm(const Signal& f, const GaborFrame& frame,
                           const AdmmOptions& opts,
                           const std::function<WindowedStack(const WindowedStack&)>& update_x,
                           const AdmmState* init, bool track_constraint) {
    check_options(opts);
    if (f.length() != frame.signal_length)
        throw FrameError("signal length does not match the frame");

    const index_t J = frame.support(), N = frame.shifts(), D = J + 1;
    const double rho = opts.rho;
    const double primal_tol = opts.primal_tol > 0.0 ? opts.primal_tol : default_tol(frame);
    const double dual_tol = opts.dual_tol > 0.0 ? opts.dual_tol : default_tol(frame);
    // exact minimizer shift for the trace term Tr(T(u))/(2J)
    const double u0_shift = 1.0 / (2.0 * rho * static_cast<double>(J));

    std::vector<Eigen::MatrixXcd> z(static_cast<std::size_t>(N));
    std::vector<Eigen::MatrixXcd> lam(static_cast<std::size_t>(N));
    if (init) {
        if (init->z.size() != static_cast<std::size_t>(N) ||
            init->lambda.size() != static_cast<std::size_t>(N))
            throw std::invalid_argument("initial state has wrong block count");
        for (index_t n = 0; n < N; ++n) {
            const auto& zi = init->z[static_cast<std::size_t>(n)];
            const auto& li = init->lambda[static_cast<std::size_t>(n)];
            if (zi.rows() != D || zi.cols() != D || li.rows() != D || li.cols() != D)
                throw std::invalid_argument("initial state block has wrong dimensions");
            z[static_cast<std::size_t>(n)] = 0.5 * (zi + zi.adjoint());
            lam[static_cast<std::size_t>(n)] = 0.5 * (li + li.adjoint());
        }
    } else {
        for (index_t n = 0; n < N; ++n) {
            z[static_cast<std::size_t>(n)] = Eigen::MatrixXcd::Zero(D, D);
            lam[static_cast<std::size_t>(n)] = Eigen::MatrixXcd::Zero(D, D);
        }
    }

    AnmSolution sol;
    sol.x = WindowedStack::Zero(J, N);
    sol.u = Eigen::MatrixXcd::Zero(J, N);
    sol.nu = Eigen::VectorXd::Zero(N);
    sol.trace.primal.reserve(static_cast<std::size_t>(opts.max_iters));
    sol.trace.dual.reserve(static_cast<std::size_t>(opts.max_iters));
    sol.trace.objective.reserve(static_cast<std::size_t>(opts.max_iters));

    const double f_norm = f.samples.norm();
    WindowedStack q(J, N);
    std::vector<double> primal_n(static_cast<std::size_t>(N));
    std::vector<double> dual_n(static_cast<std::size_t>(N));
    std::vector<double> objective_n(static_cast<std::size_t>(N));

    for (int it = 0; it < opts.max_iters; ++it) {
        for (index_t n = 0; n < N; ++n)
            q.col(n) = z[static_cast<std::size_t>(n)].col(J).head(J) -
                       lam[static_cast<std::size_t>(n)].col(J).head(J) / rho;
        sol.x = update_x(q);

        if (track_constraint) {
            Signal synth = synthesis_windowed(sol.x, frame);
            double violation = (synth.samples - f.samples).norm();
            if (f_norm > 0.0)
                violation /= f_norm;
            sol.max_constraint_violation = std::max(sol.max_constraint_violation, violation);
        }

        parallel_for(N, opts.threads, [&](index_t n) {
            const auto ni = static_cast<std::size_t>(n);
            Eigen::MatrixXcd& zn = z[ni];
            Eigen::MatrixXcd& ln = lam[ni];

            Eigen::VectorXcd u =
                toeplitz_pinv(zn.topLeftCorner(J, J) - ln.topLeftCorner(J, J) / rho);
            u[0] -= u0_shift;
            const double nu = (zn(J, J) - (ln(J, J) + 0.5) / rho).real();

            Eigen::MatrixXcd b(D, D);
            b.topLeftCorner(J, J) = toeplitz_build(u);
            b.col(J).head(J) = sol.x.col(n);
            b.row(J).head(J) = sol.x.col(n).adjoint();
            b(J, J) = nu;

            Eigen::MatrixXcd z_new = psd_project(b + ln / rho);
            primal_n[ni] = (b - z_new).norm();
            dual_n[ni] = (z_new - zn).norm();
            ln += rho * (b - z_new);
            zn = std::move(z_new);

            sol.u.col(n) = u;
            sol.nu[n] = nu;
            objective_n[ni] = 0.5 * u[0].real() + 0.5 * nu;
        });

        // fixed-order reductions keep traces identical for any thread count
        double primal = 0.0, dual = 0.0, objective = 0.0;
        for (index_t n = 0; n < N; ++n) {
            primal += primal_n[static_cast<std::size_t>(n)];
            dual += dual_n[static_cast<std::size_t>(n)];
            objective += objective_n[static_cast<std::size_t>(n)];
        }
        dual *= rho;

        sol.trace.primal.push_back(primal);
        sol.trace.dual.push_back(dual);
        sol.trace.objective.push_back(objective);
        sol.iterations = it + 1;

        if (!std::isfinite(primal) || !std::isfinite(dual) || !std::isfinite(objective))
            throw std::runtime_error("solver diverged: non-finite residual at iteration " +
                                     std::to_string(it + 1));
        if (primal <= primal_tol && dual <= dual_tol) {
            sol.converged = true;
            break;
        }
    }

    sol.objective = sol.trace.objective.back();
    double min_eig = 0.0;
    double max_eig = 0.0;
    for (index_t n = 0; n < N; ++n) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(z[static_cast<std::size_t>(n)],
                                                           Eigen::EigenvaluesOnly);
        min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
        max_eig = std::max(max_eig, es.eigenvalues().maxCoeff());
    }
    sol.min_final_eigenvalue = min_eig;
    sol.max_final_eigenvalue = max_eig;
    return sol;
}

} // namespace

AnmSolution solve_joint_anm(const Signal& f, const GaborFrame& frame,
                            const AdmmOptions& opts, const AdmmState& init) {
    return run_block_admm(
        f, frame, opts,
        [&](const WindowedStack& q) { return project_reconstruction(q, f, frame); },
        &init, true);
}

AnmSolution solve_joint_anm(const Signal& f, const GaborFrame& frame,
                            const AdmmOptions& opts) {
    return run_block_admm(
        f, frame, opts,
        [&](const WindowedStack& q) { return project_reconstruction(q, f, frame); },
        nullptr, true);
}

AnmSolution solve_windowwise_anm(const Signal& f, const GaborFrame& frame,
                                 const AdmmOptions& opts) {
    if (f.length() != frame.signal_length)
        throw FrameError("signal length does not match the frame");
    const index_t J = frame.support(), N = frame.shifts();
    const index_t a = frame.hop, L = frame.signal_length;

    // The per-shift constraint g[j]*x_n[j] = f[(an+j) mod L] pins x wherever
    // the window tap is nonzero; remaining coordinates stay free.
    WindowedStack pinned = WindowedStack::Zero(J, N);
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> is_pinned(J, N);
    for (index_t n = 0; n < N; ++n) {
        for (index_t j = 0; j < J; ++j) {
            const double tap = frame.window.taps[j];
            is_pinned(j, n) = tap != 0.0;
            if (tap != 0.0)
                pinned(j, n) = f.samples[(a * n + j) % L] / tap;
        }
    }

    return run_block_admm(
        f, frame, opts,
        [&](const WindowedStack& q) {
            WindowedStack x = q;
            for (index_t n = 0; n < N; ++n)
                for (index_t j = 0; j < J; ++j)
                    if (is_pinned(j, n))
                        x(j, n) = pinned(j, n);
            return x;
        },
        nullptr, false);
}

namespace {

// complex soft-threshold: shrink the magnitude, keep the phase
void shrink(Eigen::VectorXcd& v, double gamma) {
    for (index_t i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v[i]);
        v[i] = mag > gamma ? v[i] * ((mag - gamma) / mag) : cplx{0.0, 0.0};
    }
}

} // namespace

L1Solution solve_l1_bp(const Signal& f, const GaborFrame& frame, const AdmmOptions& opts) {
    check_options(opts);
    if (f.length() != frame.signal_length)
        throw FrameError("signal length does not match the frame");
    const index_t J = frame.support(), M = frame.channels, N = frame.shifts();
    if (J > M)
        throw FrameError("l1 basis pursuit needs window support <= channel count");

    // projection onto {c : synthesis(c) = f} via the diagonal normal operator
    const Eigen::VectorXd scale = static_cast<double>(M) * frame.coverage;
    auto project = [&](const GridCoefficients& c) {
        Signal r = idgt(c, frame);
        r.samples -= f.samples;
        r.samples.array() /= scale.array();
        return GridCoefficients(c - dgt(r, frame));
    };

    const double gamma = 1.0; // prox step; affects the path, not the limit
    const double tol =
        opts.primal_tol > 0.0 ? opts.primal_tol
                              : 1e-9 * static_cast<double>(M) * static_cast<double>(N);

    L1Solution sol;
    sol.trace.reserve(static_cast<std::size_t>(opts.max_iters));
    GridCoefficients y = GridCoefficients::Zero(M * N);
    for (int it = 0; it < opts.max_iters; ++it) {
        GridCoefficients x = project(y);
        GridCoefficients w = 2.0 * x - y;
        shrink(w, gamma);
        w -= x;
        const double residual = w.norm();
        y += w;
        sol.trace.push_back(residual);
        sol.iterations = it + 1;
        if (!std::isfinite(residual))
            throw std::runtime_error("l1 solver diverged at iteration " + std::to_string(it + 1));
        if (residual <= tol) {
            sol.converged = true;
            break;
        }
    }

    sol.coefficients = project(y);
    sol.objective = sol.coefficients.cwiseAbs().sum();
    const double f_norm = f.samples.norm();
    double feas = (idgt(sol.coefficients, frame).samples - f.samples).norm();
    sol.constraint_residual = f_norm > 0.0 ? feas / f_norm : feas;
    return sol;
}

} // namespace tfatom
