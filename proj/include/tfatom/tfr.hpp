// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "tfatom/solvers.hpp"
#include "tfatom/toeplitz.hpp"

namespace tfatom {

// One off-grid atom: shift index n, frequency in [0,1), complex coefficient
// in global phase convention, i.e. the contribution to the signal is
//   g[j] * coefficient * exp(i 2 pi omega * (a n + j))  at sample (a n + j) mod L.
struct SparseAtom {
    index_t shift = 0;
    double omega = 0.0;
    cplx coefficient{0.0, 0.0};
};

struct SparseTF {
    std::vector<SparseAtom> atoms;
    index_t hop = 0;
    index_t channels = 0;
    index_t signal_length = 0;
};

struct ExtractionIssue {
    index_t shift = 0;
    std::string message;
};

// Factor each per-shift generator of an ANM solution into atoms and fit
// coefficients against the block estimate. Shifts whose block norm is below
// 1e-9 of the largest are skipped; per-shift numerical failures downgrade
// to an empty shift with a recorded issue instead of aborting.
SparseTF extract_sparse_tf(const AnmSolution& sol, const GaborFrame& frame,
                           double rank_tol = 1e-6,
                           FreqMethod method = FreqMethod::matrix_pencil,
                           std::vector<ExtractionIssue>* issues = nullptr);

// Reinterpret grid coefficients as on-grid atoms (omega = m/M) so grid and
// off-grid results flow through the same downstream code. Entries with
// magnitude <= threshold * max magnitude are dropped (threshold 0 keeps
// everything nonzero).
SparseTF grid_to_sparse(const GridCoefficients& c, const GaborFrame& frame,
                        double threshold = 0.0);

// Dense magnitude image in dB for display: freq_bins rows x N columns,
// row 0 = omega 0. Each atom deposits |coefficient|^2 into its nearest
// frequency bin (energies accumulate), then the image is 10*log10 relative
// to the global peak, clamped below at db_floor.
Eigen::MatrixXd rasterize(const SparseTF& tf, index_t freq_bins = 1024,
                          double db_floor = -80.0);

// |coefficient|^2 sorted descending; index 0 is the strongest atom.
Eigen::VectorXd energy_curve(const SparseTF& tf);

// Relative l2 error between f and the windowed synthesis of the atoms.
double reconstruction_error(const SparseTF& tf, const Signal& f,
                            const GaborFrame& frame);

} // namespace tfatom
