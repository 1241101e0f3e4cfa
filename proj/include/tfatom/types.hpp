// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <optional>
#include <Eigen/Dense>

namespace tfatom {

using cplx = std::complex<double>;
using index_t = Eigen::Index;

// Cyclic discrete-time signal. sample_rate is carried as metadata only;
// all processing is in normalized frequency (cycles/sample).
struct Signal {
    Eigen::VectorXcd samples;
    std::optional<double> sample_rate;

    index_t length() const { return samples.size(); }
};

enum class WindowKind { rectangular, hann, slepian };

struct Window {
    Eigen::VectorXd taps;
    WindowKind kind = WindowKind::rectangular;

    index_t length() const { return taps.size(); }
};

const char* window_kind_name(WindowKind kind);

} // namespace tfatom
