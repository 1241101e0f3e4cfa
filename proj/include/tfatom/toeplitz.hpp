// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "tfatom/types.hpp"

namespace tfatom {

// Hermitian Toeplitz matrix from its first-column generator u (length D):
//   T[r,c] = u[r-c] for r >= c, conj(u[c-r]) for r < c.
// u[0] must be real for the result to be Hermitian; the imaginary part of
// u[0] is dropped.
Eigen::MatrixXcd toeplitz_build(const Eigen::VectorXcd& u);

// Left inverse of toeplitz_build: diagonal-averaged generator
//   u[n] = 1/(2(D-n)) * sum_k (X[k+n,k] + conj(X[k,k+n])).
// Satisfies toeplitz_pinv(toeplitz_build(u)) == u exactly (up to rounding)
// for any generator with real u[0]. X must be square.
Eigen::VectorXcd toeplitz_pinv(const Eigen::MatrixXcd& X);

// Projection onto the positive semidefinite cone: eigendecompose the
// Hermitian part and clamp negative eigenvalues to zero.
Eigen::MatrixXcd psd_project(const Eigen::MatrixXcd& X);

enum class FreqMethod { matrix_pencil, prony };

struct AtomEstimate {
    double omega = 0.0;        // normalized frequency in [0,1)
    double power = 0.0;        // from the Vandermonde factorization
    cplx coefficient{0.0, 0.0}; // filled by solve_coefficients
    bool power_adjusted = false; // |coefficient| disagreed with sqrt(power)
};

// Factor a PSD Toeplitz generator as u[n] = sum_k p_k exp(i 2 pi w_k n):
// rank-detect via eigenvalue threshold rank_tol * lambda_max, recover the
// frequencies (matrix pencil on the signal subspace, or classical
// linear-prediction rooting), then solve for the real powers.
// Throws DecompositionError when the generator is full rank (no strict
// signal/noise split) and std::domain_error when T(u) is not PSD within
// tolerance. A zero generator yields an empty set.
std::vector<AtomEstimate> vandermonde_decompose(const Eigen::VectorXcd& u,
                                                double rank_tol = 1e-6,
                                                FreqMethod method = FreqMethod::matrix_pencil);

// Given frequencies from a decomposition and a target block x (length J),
// least-squares solve V c = x for complex coefficients on the atoms
// a(w)[j] = exp(i 2 pi w j). Frequencies closer than 1e-9 make the system
// ill-conditioned -> DecompositionError. When |c_k| and sqrt(p_k) disagree
// by more than 1e-6 (relative), power is replaced by |c_k|^2 and the atom
// is flagged power_adjusted.
struct CoefficientFit {
    std::vector<AtomEstimate> atoms;
    double residual = 0.0; // ||V c - x||_2
};
CoefficientFit solve_coefficients(const std::vector<AtomEstimate>& atoms,
                                  const Eigen::VectorXcd& x);

} // namespace tfatom
