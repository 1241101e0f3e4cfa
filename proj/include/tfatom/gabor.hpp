// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tfatom/types.hpp"

namespace tfatom {

// Regular time-frequency lattice on a cyclic signal of length L: window
// support J, hop a (a | L), M frequency channels. N = L/a time shifts.
//
// `coverage` caches s2[l] = sum_n g[(l - a n) mod L]^2, the diagonal of the
// windowed synthesis normal operator. A valid frame has s2 > 0 everywhere.
struct GaborFrame {
    Window window;
    index_t hop = 0;       // a
    index_t channels = 0;  // M
    index_t signal_length = 0; // L
    Eigen::VectorXd coverage;  // length L, strictly positive

    index_t support() const { return window.length(); } // J
    index_t shifts() const { return signal_length / hop; } // N
};

// Validates and precomputes coverage. Throws FrameError unless
// 1 <= a, 1 <= M, a | L, J <= L, and the shifted windows cover every sample.
GaborFrame make_frame(Window window, index_t hop, index_t channels, index_t signal_length);

// Grid coefficients live in a flat vector, c[m + n*M] for channel m, shift n.
using GridCoefficients = Eigen::VectorXcd;

// Stack of windowed length-J blocks, one column per shift (J x N).
using WindowedStack = Eigen::MatrixXcd;

// Transform of f against the frame's own window (or an explicit analysis
// window of the same support):
//   c[m + n*M] = sum_j f[(a n + j) mod L] * w[j] * exp(-i 2 pi m j / M).
// No normalization factor is applied.
GridCoefficients dgt(const Signal& f, const GaborFrame& frame);
GridCoefficients dgt(const Signal& f, const GaborFrame& frame, const Window& analysis_window);

// Adjoint-style synthesis: out[(a n + j) mod L] += g[j] * sum_m c[m + n*M] exp(+i 2 pi m j / M).
Signal idgt(const GridCoefficients& c, const GaborFrame& frame);

// Canonical dual window g[j] / (M * s2[j mod a]); requires J <= M (each
// block must alias-fold trivially). Throws FrameError otherwise.
Window canonical_dual(const GaborFrame& frame);

// Windowed block synthesis f = sum_n W_n x_n and its adjoint.
Signal synthesis_windowed(const WindowedStack& x, const GaborFrame& frame);
WindowedStack analysis_stack(const Signal& f, const GaborFrame& frame);
WindowedStack analysis_stack(const Signal& f, const GaborFrame& frame, const Window& analysis_window);

// Orthogonal projection of a stack onto {x : synthesis_windowed(x) = f},
// computed through the diagonal normal operator:
//   P(v) = v - A*( (A v - f) / s2 ).
WindowedStack project_reconstruction(const WindowedStack& v, const Signal& f,
                                     const GaborFrame& frame);

} // namespace tfatom
