// SPDX-License-Identifier: Apache-2.0
#include "fft.hpp"

#include <mutex>
#include <unordered_map>
#include <vector>

#include <fftw3.h>

namespace tfatom::detail {

namespace {

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

std::mutex plan_mutex;
std::unordered_map<std::size_t, PlanPair>& plan_cache() {
    static auto* cache = new std::unordered_map<std::size_t, PlanPair>();
    return *cache;
}

// FFTW_UNALIGNED lets one plan serve any buffer of the right length;
// plans are created once per transform size on a scratch buffer.
PlanPair plans_for(std::size_t n) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto& cache = plan_cache();
    auto it = cache.find(n);
    if (it != cache.end())
        return it->second;

    std::vector<std::complex<double>> scratch(n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    PlanPair p;
    p.fwd = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.bwd = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache.emplace(n, p);
    return p;
}

} // namespace

void fft_forward(std::complex<double>* data, std::size_t n) {
    if (n == 0)
        return;
    auto* buf = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plans_for(n).fwd, buf, buf);
}

void fft_backward(std::complex<double>* data, std::size_t n) {
    if (n == 0)
        return;
    auto* buf = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plans_for(n).bwd, buf, buf);
}

} // namespace tfatom::detail
