// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "tfatom/types.hpp"

namespace tfatom {

enum class TestSignalKind { sinusoid, linear_chirp, quadratic_chirp, mixture };

// Polynomial-phase component: instantaneous frequency
//   w(l) = f0 + rate*l + rate2*l^2   (cycles/sample)
// i.e. samples amplitude * exp(i*2*pi*(f0*l + rate/2*l^2 + rate2/3*l^3)).
struct Tone {
    double f0 = 0.0;
    double rate = 0.0;
    double rate2 = 0.0;
    double amplitude = 1.0;
};

// Sum of polynomial-phase tones. Throws std::invalid_argument when a
// component's instantaneous frequency leaves [0,1) anywhere on 0..length-1,
// or when length < 1.
Signal synth_tones(index_t length, const std::vector<Tone>& tones);

// Default components for the named test signals:
//   sinusoid:        f0 = 0.1
//   linear chirp:    0.05 -> 0.35 across the signal
//   quadratic chirp: 0.4  -> 0.1  (pure quadratic frequency law)
//   mixture:         all three summed
std::vector<Tone> default_components(TestSignalKind kind, index_t length);

Signal gen_test_signal(TestSignalKind kind, index_t length);

// Same, with the single component overridden (mixture rejects an override).
Signal gen_test_signal(TestSignalKind kind, index_t length, const Tone& component);

// Window constructors. All return strictly real taps with peak value 1.
Window rectangular_window(index_t length);
Window hann_window(index_t length); // periodic convention: 0.5 - 0.5*cos(2*pi*j/length)

// Discrete prolate spheroidal (first-order) window: top eigenvector of the
// tridiagonal commuting operator for half-bandwidth `half_bandwidth`
// (0 < half_bandwidth < 0.5), symmetrized and peak-normalized.
Window slepian_window(index_t length, double half_bandwidth);

Window make_window(WindowKind kind, index_t length, double half_bandwidth = 0.0);

} // namespace tfatom
