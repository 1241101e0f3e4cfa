// SPDX-License-Identifier: Apache-2.0
#include "tfatom/gabor.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "tfatom/errors.hpp"
#include "fft.hpp"

namespace tfatom {

GaborFrame make_frame(Window window, index_t hop, index_t channels, index_t signal_length) {
    const index_t J = window.length();
    if (J < 1)
        throw FrameError("window is empty");
    for (index_t j = 0; j < J; ++j)
        if (!std::isfinite(window.taps[j]))
            throw FrameError("window has non-finite taps");
    if (hop < 1)
        throw FrameError("hop must be >= 1");
    if (channels < 1)
        throw FrameError("channel count must be >= 1");
    if (signal_length < 1)
        throw FrameError("signal length must be >= 1");
    if (signal_length % hop != 0)
        throw FrameError("hop must divide the signal length (got " + std::to_string(hop) +
                         " vs " + std::to_string(signal_length) + ")");
    if (J > signal_length)
        throw FrameError("window support exceeds the signal length");

    GaborFrame frame;
    frame.window = std::move(window);
    frame.hop = hop;
    frame.channels = channels;
    frame.signal_length = signal_length;

    const index_t N = signal_length / hop;
    Eigen::VectorXd s2 = Eigen::VectorXd::Zero(signal_length);
    for (index_t n = 0; n < N; ++n)
        for (index_t j = 0; j < J; ++j)
            s2[(hop * n + j) % signal_length] += frame.window.taps[j] * frame.window.taps[j];
    for (index_t l = 0; l < signal_length; ++l)
        if (!(s2[l] > 0.0))
            throw FrameError("shifted windows leave sample " + std::to_string(l) +
                             " uncovered");
    frame.coverage = std::move(s2);
    return frame;
}

namespace {

GridCoefficients dgt_impl(const Signal& f, const GaborFrame& frame,
                          const Eigen::VectorXd& w) {
    const index_t L = frame.signal_length;
    if (f.length() != L)
        throw FrameError("signal length does not match the frame");
    if (w.size() != frame.support())
        throw FrameError("analysis window support does not match the frame");
    const index_t J = frame.support(), a = frame.hop, M = frame.channels;
    const index_t N = frame.shifts();

    GridCoefficients c(M * N);
    std::vector<cplx> block(M);
    for (index_t n = 0; n < N; ++n) {
        std::fill(block.begin(), block.end(), cplx{0.0, 0.0});
        // windowed slice, alias-folded onto M points (j <= M is a plain pad)
        for (index_t j = 0; j < J; ++j)
            block[j % M] += f.samples[(a * n + j) % L] * w[j];
        detail::fft_forward(block.data(), static_cast<std::size_t>(M));
        for (index_t m = 0; m < M; ++m)
            c[m + n * M] = block[m];
    }
    return c;
}

} // namespace

GridCoefficients dgt(const Signal& f, const GaborFrame& frame) {
    return dgt_impl(f, frame, frame.window.taps);
}

GridCoefficients dgt(const Signal& f, const GaborFrame& frame, const Window& analysis_window) {
    return dgt_impl(f, frame, analysis_window.taps);
}

Signal idgt(const GridCoefficients& c, const GaborFrame& frame) {
    const index_t L = frame.signal_length, J = frame.support();
    const index_t a = frame.hop, M = frame.channels, N = frame.shifts();
    if (c.size() != M * N)
        throw FrameError("coefficient count does not match the frame grid");

    Signal out;
    out.samples = Eigen::VectorXcd::Zero(L);
    std::vector<cplx> block(M);
    for (index_t n = 0; n < N; ++n) {
        for (index_t m = 0; m < M; ++m)
            block[m] = c[m + n * M];
        detail::fft_backward(block.data(), static_cast<std::size_t>(M));
        for (index_t j = 0; j < J; ++j)
            out.samples[(a * n + j) % L] += frame.window.taps[j] * block[j % M];
    }
    return out;
}

Window canonical_dual(const GaborFrame& frame) {
    const index_t J = frame.support(), M = frame.channels, a = frame.hop;
    if (J > M)
        throw FrameError("canonical dual needs window support <= channel count");
    Window dual;
    dual.kind = frame.window.kind;
    dual.taps.resize(J);
    for (index_t j = 0; j < J; ++j)
        dual.taps[j] = frame.window.taps[j] /
                       (static_cast<double>(M) * frame.coverage[j % a]);
    return dual;
}

Signal synthesis_windowed(const WindowedStack& x, const GaborFrame& frame) {
    const index_t L = frame.signal_length, J = frame.support();
    const index_t a = frame.hop, N = frame.shifts();
    if (x.rows() != J || x.cols() != N)
        throw FrameError("stack shape does not match the frame");

    Signal out;
    out.samples = Eigen::VectorXcd::Zero(L);
    // fixed accumulation order keeps results identical across thread counts
    for (index_t n = 0; n < N; ++n)
        for (index_t j = 0; j < J; ++j)
            out.samples[(a * n + j) % L] += frame.window.taps[j] * x(j, n);
    return out;
}

WindowedStack analysis_stack(const Signal& f, const GaborFrame& frame,
                             const Window& analysis_window) {
    const index_t L = frame.signal_length, J = frame.support();
    const index_t a = frame.hop, N = frame.shifts();
    if (f.length() != L)
        throw FrameError("signal length does not match the frame");
    if (analysis_window.length() != J)
        throw FrameError("analysis window support does not match the frame");

    WindowedStack x(J, N);
    for (index_t n = 0; n < N; ++n)
        for (index_t j = 0; j < J; ++j)
            x(j, n) = analysis_window.taps[j] * f.samples[(a * n + j) % L];
    return x;
}

WindowedStack analysis_stack(const Signal& f, const GaborFrame& frame) {
    return analysis_stack(f, frame, frame.window);
}

WindowedStack project_reconstruction(const WindowedStack& v, const Signal& f,
                                     const GaborFrame& frame) {
    Signal r = synthesis_windowed(v, frame);
    r.samples -= f.samples;
    r.samples.array() /= frame.coverage.array();
    return v - analysis_stack(r, frame);
}

} // namespace tfatom
