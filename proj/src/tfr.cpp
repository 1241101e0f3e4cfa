// SPDX-License-Identifier: Apache-2.0
#include "tfatom/tfr.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tfatom/errors.hpp"

namespace tfatom {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

SparseTF extract_sparse_tf(const AnmSolution& sol, const GaborFrame& frame,
                           double rank_tol, FreqMethod method,
                           std::vector<ExtractionIssue>* issues) {
    const index_t J = frame.support(), N = frame.shifts(), a = frame.hop;
    if (sol.x.rows() != J || sol.x.cols() != N || sol.u.rows() != J || sol.u.cols() != N)
        throw FrameError("solution shape does not match the frame");

    SparseTF out;
    out.hop = a;
    out.channels = frame.channels;
    out.signal_length = frame.signal_length;

    double max_block = 0.0;
    for (index_t n = 0; n < N; ++n)
        max_block = std::max(max_block, sol.x.col(n).norm());

    for (index_t n = 0; n < N; ++n) {
        if (sol.x.col(n).norm() <= 1e-9 * max_block)
            continue;
        try {
            auto atoms = vandermonde_decompose(sol.u.col(n), rank_tol, method);
            if (atoms.empty()) {
                if (issues)
                    issues->push_back({n, "nonzero block but empty generator decomposition"});
                continue;
            }
            CoefficientFit fit = solve_coefficients(atoms, sol.x.col(n));
            for (const auto& atom : fit.atoms) {
                // local phase is measured from the window start; shift it to
                // the global sample clock
                const cplx global_c =
                    atom.coefficient *
                    std::polar(1.0, -two_pi * atom.omega * static_cast<double>(a * n));
                out.atoms.push_back({n, atom.omega, global_c});
            }
        } catch (const std::exception& e) {
            if (issues)
                issues->push_back({n, e.what()});
        }
    }
    return out;
}

SparseTF grid_to_sparse(const GridCoefficients& c, const GaborFrame& frame,
                        double threshold) {
    if (threshold < 0.0)
        throw std::invalid_argument("threshold must be >= 0");
    const index_t M = frame.channels, N = frame.shifts(), a = frame.hop;
    if (c.size() != M * N)
        throw FrameError("coefficient count does not match the frame grid");

    SparseTF out;
    out.hop = a;
    out.channels = M;
    out.signal_length = frame.signal_length;

    const double max_mag = c.size() ? c.cwiseAbs().maxCoeff() : 0.0;
    const double cut = threshold * max_mag;
    for (index_t n = 0; n < N; ++n) {
        for (index_t m = 0; m < M; ++m) {
            const cplx v = c[m + n * M];
            if (std::abs(v) > cut && v != cplx{0.0, 0.0}) {
                const double omega = static_cast<double>(m) / static_cast<double>(M);
                const cplx global_c =
                    v * std::polar(1.0, -two_pi * omega * static_cast<double>(a * n));
                out.atoms.push_back({n, omega, global_c});
            }
        }
    }
    return out;
}

Eigen::MatrixXd rasterize(const SparseTF& tf, index_t freq_bins, double db_floor) {
    if (freq_bins < 1)
        throw std::invalid_argument("freq_bins must be >= 1");
    if (!(db_floor < 0.0))
        throw std::invalid_argument("db_floor must be negative");
    if (tf.hop < 1 || tf.signal_length < 1 || tf.signal_length % tf.hop != 0)
        throw std::invalid_argument("sparse container has inconsistent frame metadata");
    const index_t n_shifts = tf.signal_length / tf.hop;

    Eigen::MatrixXd energy = Eigen::MatrixXd::Zero(freq_bins, n_shifts);
    for (const auto& atom : tf.atoms) {
        if (atom.shift < 0 || atom.shift >= n_shifts)
            throw std::invalid_argument("atom shift index out of range");
        auto bin = static_cast<index_t>(
            std::llround(atom.omega * static_cast<double>(freq_bins)));
        bin %= freq_bins; // cyclic: omega near 1 snaps to bin 0
        if (bin < 0)
            bin += freq_bins;
        energy(bin, atom.shift) += std::norm(atom.coefficient);
    }

    const double peak = energy.maxCoeff();
    Eigen::MatrixXd db(freq_bins, n_shifts);
    if (peak <= 0.0) {
        db.setConstant(db_floor);
        return db;
    }
    for (index_t r = 0; r < freq_bins; ++r)
        for (index_t c = 0; c < n_shifts; ++c)
            db(r, c) = energy(r, c) > 0.0
                           ? std::max(10.0 * std::log10(energy(r, c) / peak), db_floor)
                           : db_floor;
    return db;
}

Eigen::VectorXd energy_curve(const SparseTF& tf) {
    Eigen::VectorXd e(static_cast<index_t>(tf.atoms.size()));
    for (index_t i = 0; i < e.size(); ++i)
        e[i] = std::norm(tf.atoms[static_cast<std::size_t>(i)].coefficient);
    std::sort(e.data(), e.data() + e.size(), std::greater<double>());
    return e;
}

double reconstruction_error(const SparseTF& tf, const Signal& f, const GaborFrame& frame) {
    const index_t J = frame.support(), N = frame.shifts(), a = frame.hop;
    if (f.length() != frame.signal_length || tf.signal_length != frame.signal_length ||
        tf.hop != frame.hop)
        throw FrameError("sparse container does not match the frame");

    WindowedStack x = WindowedStack::Zero(J, N);
    for (const auto& atom : tf.atoms) {
        if (atom.shift < 0 || atom.shift >= N)
            throw std::invalid_argument("atom shift index out of range");
        // global-phase atom restricted to the window support
        for (index_t j = 0; j < J; ++j)
            x(j, atom.shift) += atom.coefficient *
                                std::polar(1.0, two_pi * atom.omega *
                                                    static_cast<double>(a * atom.shift + j));
    }

    const double f_norm = f.samples.norm();
    const double err = (synthesis_windowed(x, frame).samples - f.samples).norm();
    return f_norm > 0.0 ? err / f_norm : err;
}

} // namespace tfatom
