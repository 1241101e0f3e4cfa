// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>

namespace tfatom::detail {

// Unnormalized in-place complex DFTs (plan cache behind a mutex; execution
// is safe to call concurrently).
void fft_forward(std::complex<double>* data, std::size_t n);  // exp(-i 2 pi ...)
void fft_backward(std::complex<double>* data, std::size_t n); // exp(+i 2 pi ...)

} // namespace tfatom::detail
