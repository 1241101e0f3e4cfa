// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace tfatom {

// Invalid analysis/synthesis system: bad hop/channel combination, window
// longer than the signal, or a lattice that leaves part of the signal
// uncovered.
struct FrameError : std::runtime_error {
    explicit FrameError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure while factoring a Toeplitz generator into atoms
// (full-rank generator, collapsed frequencies, ...).
struct DecompositionError : std::runtime_error {
    explicit DecompositionError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace tfatom
