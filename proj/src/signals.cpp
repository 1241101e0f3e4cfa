// SPDX-License-Identifier: Apache-2.0
#include "tfatom/signals.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tfatom {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

double instantaneous_freq(const Tone& t, double l) {
    return t.f0 + t.rate * l + t.rate2 * l * l;
}

void check_tone(const Tone& t, index_t length) {
    if (!std::isfinite(t.f0) || !std::isfinite(t.rate) || !std::isfinite(t.rate2) ||
        !std::isfinite(t.amplitude))
        throw std::invalid_argument("tone parameters must be finite");
    const double last = static_cast<double>(length - 1);
    auto in_range = [](double w) { return w >= 0.0 && w < 1.0; };
    if (!in_range(instantaneous_freq(t, 0.0)) || !in_range(instantaneous_freq(t, last)))
        throw std::invalid_argument("instantaneous frequency leaves [0,1)");
    if (t.rate2 != 0.0) {
        // parabola vertex, if it falls inside the sampled range
        const double lv = -t.rate / (2.0 * t.rate2);
        if (lv > 0.0 && lv < last && !in_range(instantaneous_freq(t, lv)))
            throw std::invalid_argument("instantaneous frequency leaves [0,1)");
    }
}
} // namespace

const char* window_kind_name(WindowKind kind) {
    switch (kind) {
    case WindowKind::rectangular: return "rectangular";
    case WindowKind::hann: return "hann";
    case WindowKind::slepian: return "slepian";
    }
    return "?";
}

Signal synth_tones(index_t length, const std::vector<Tone>& tones) {
    if (length < 1)
        throw std::invalid_argument("signal length must be >= 1");
    for (const auto& t : tones)
        check_tone(t, length);

    Signal out;
    out.samples = Eigen::VectorXcd::Zero(length);
    for (const auto& t : tones) {
        for (index_t l = 0; l < length; ++l) {
            const double ld = static_cast<double>(l);
            const double phase =
                t.f0 * ld + 0.5 * t.rate * ld * ld + (t.rate2 / 3.0) * ld * ld * ld;
            out.samples[l] += t.amplitude * std::polar(1.0, two_pi * phase);
        }
    }
    return out;
}

std::vector<Tone> default_components(TestSignalKind kind, index_t length) {
    if (length < 2)
        throw std::invalid_argument("test signals need length >= 2");
    const double span = static_cast<double>(length - 1);
    const Tone sin_tone{0.1, 0.0, 0.0, 1.0};
    const Tone lin_tone{0.05, 0.3 / span, 0.0, 1.0};          // 0.05 -> 0.35
    const Tone quad_tone{0.4, 0.0, -0.3 / (span * span), 1.0}; // 0.4 -> 0.1

    switch (kind) {
    case TestSignalKind::sinusoid: return {sin_tone};
    case TestSignalKind::linear_chirp: return {lin_tone};
    case TestSignalKind::quadratic_chirp: return {quad_tone};
    case TestSignalKind::mixture: return {sin_tone, lin_tone, quad_tone};
    }
    throw std::invalid_argument("unknown test signal kind");
}

Signal gen_test_signal(TestSignalKind kind, index_t length) {
    return synth_tones(length, default_components(kind, length));
}

Signal gen_test_signal(TestSignalKind kind, index_t length, const Tone& component) {
    if (kind == TestSignalKind::mixture)
        throw std::invalid_argument("mixture takes no single-component override");
    return synth_tones(length, {component});
}

Window rectangular_window(index_t length) {
    if (length < 1)
        throw std::invalid_argument("window length must be >= 1");
    return {Eigen::VectorXd::Ones(length), WindowKind::rectangular};
}

Window hann_window(index_t length) {
    if (length < 1)
        throw std::invalid_argument("window length must be >= 1");
    Eigen::VectorXd taps(length);
    for (index_t j = 0; j < length; ++j)
        taps[j] = 0.5 - 0.5 * std::cos(two_pi * static_cast<double>(j) /
                                       static_cast<double>(length));
    // periodic hann never reaches 1 exactly on odd lengths; normalize the peak
    const double peak = taps.maxCoeff();
    if (peak > 0.0)
        taps /= peak;
    return {std::move(taps), WindowKind::hann};
}

Window slepian_window(index_t length, double half_bandwidth) {
    if (length < 1)
        throw std::invalid_argument("window length must be >= 1");
    if (!(half_bandwidth > 0.0) || !(half_bandwidth < 0.5))
        throw std::invalid_argument("half_bandwidth must lie in (0, 0.5)");
    if (length == 1)
        return {Eigen::VectorXd::Ones(1), WindowKind::slepian};

    // Tridiagonal operator that commutes with the band-limited energy
    // concentration kernel; its top eigenvector is the first prolate sequence.
    const index_t n = length;
    Eigen::VectorXd diag(n), off(n - 1);
    const double c = std::cos(two_pi * half_bandwidth);
    for (index_t j = 0; j < n; ++j) {
        const double d = (static_cast<double>(n) - 1.0 - 2.0 * static_cast<double>(j)) / 2.0;
        diag[j] = d * d * c;
    }
    for (index_t j = 0; j + 1 < n; ++j) {
        const double k = static_cast<double>(j + 1);
        off[j] = k * (static_cast<double>(n) - k) / 2.0;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("prolate eigensolve failed");

    Eigen::VectorXd v = es.eigenvectors().col(n - 1); // largest eigenvalue
    // The first prolate vector has one sign throughout; make it positive.
    index_t peak_at = 0;
    v.cwiseAbs().maxCoeff(&peak_at);
    if (v[peak_at] < 0.0)
        v = -v;
    // Enforce exact even symmetry (the eigensolve is symmetric only to
    // rounding) and unit peak.
    for (index_t j = 0; j < n / 2; ++j) {
        const double avg = 0.5 * (v[j] + v[n - 1 - j]);
        v[j] = avg;
        v[n - 1 - j] = avg;
    }
    v /= v.maxCoeff();
    return {std::move(v), WindowKind::slepian};
}

Window make_window(WindowKind kind, index_t length, double half_bandwidth) {
    switch (kind) {
    case WindowKind::rectangular: return rectangular_window(length);
    case WindowKind::hann: return hann_window(length);
    case WindowKind::slepian: return slepian_window(length, half_bandwidth);
    }
    throw std::invalid_argument("unknown window kind");
}

} // namespace tfatom
