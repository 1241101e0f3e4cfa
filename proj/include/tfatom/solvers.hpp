// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "tfatom/gabor.hpp"
#include "tfatom/types.hpp"

namespace tfatom {

struct AdmmOptions {
    double rho = 1.0;        // penalty parameter
    int max_iters = 5000;
    // Absolute stopping thresholds on the summed primal/dual residuals.
    // Non-positive means "use the default 1e-7 * N * (J+1)".
    double primal_tol = 0.0;
    double dual_tol = 0.0;
    int threads = 1;         // worker-count hint for the per-shift updates
    std::uint64_t seed = 0;  // reserved; the solvers are deterministic
};

struct ResidualTrace {
    std::vector<double> primal;    // sum_n ||B_n - Z_n||_F per iteration
    std::vector<double> dual;      // rho * sum_n ||Z_n - Z_n_prev||_F
    std::vector<double> objective; // sum_n (Tr T(u_n)/(2J) + nu_n/2)
};

// Optional initial point for the consensus variables (one (J+1)x(J+1)
// Hermitian pair per shift). Default state is all zeros.
struct AdmmState {
    std::vector<Eigen::MatrixXcd> z;
    std::vector<Eigen::MatrixXcd> lambda;
};

struct AnmSolution {
    WindowedStack x;      // J x N block estimates
    Eigen::MatrixXcd u;   // J x N Toeplitz generators, column n for shift n
    Eigen::VectorXd nu;   // length N
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
    ResidualTrace trace;
    // Diagnostics recorded during/after the run.
    double max_constraint_violation = 0.0; // max over iterations of ||A x - f|| / ||f||
    double min_final_eigenvalue = 0.0;     // most negative eig across final Z_n
    double max_final_eigenvalue = 0.0;     // largest eig across final Z_n
};

// Joint atomic-norm solver: block-splitting ADMM over per-shift lifted
// matrices B_n = [[T(u_n), x_n],[x_n^*, nu_n]], with the block estimates
// coupled through the exact-reconstruction affine constraint.
AnmSolution solve_joint_anm(const Signal& f, const GaborFrame& frame,
                            const AdmmOptions& opts = {});
AnmSolution solve_joint_anm(const Signal& f, const GaborFrame& frame,
                            const AdmmOptions& opts, const AdmmState& init);

// Decoupled variant: identical per-shift updates, but each block is pinned
// to its own windowed slice (x_n[j] = f[(a n + j) mod L] / g[j] wherever
// g[j] != 0) instead of the shared constraint.
AnmSolution solve_windowwise_anm(const Signal& f, const GaborFrame& frame,
                                 const AdmmOptions& opts = {});

struct L1Solution {
    GridCoefficients coefficients; // length M*N, exactly feasible
    double objective = 0.0;        // l1 norm of coefficients
    int iterations = 0;
    bool converged = false;
    std::vector<double> trace;         // fixed-point residual per iteration
    double constraint_residual = 0.0;  // ||G c - f|| / ||f|| of the output
};

// Minimum-l1 grid-coefficient fit subject to exact synthesis, by
// Douglas-Rachford splitting between the affine constraint set and the
// complex soft-threshold (prox step size 1.0, no relaxation). The returned
// iterate is the constraint-projected one, so it is feasible to rounding.
L1Solution solve_l1_bp(const Signal& f, const GaborFrame& frame,
                       const AdmmOptions& opts = {});

} // namespace tfatom
