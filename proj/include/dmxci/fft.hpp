#pragma once

#include <complex>
#include <mutex>
#include <vector>

namespace dmxci::fft {

using cd = std::complex<double>;

// In-place transforms backed by FFTW3 with plans created once per size and
// cached (FFTW_ESTIMATE, so plan selection is reproducible run to run).
// forward() is unscaled, inverse() carries the 1/N factor, so
// inverse(forward(x)) == x up to rounding. Both are thread safe.
void forward(std::vector<cd>& data);
void inverse(std::vector<cd>& data);

// FFTW's planner is not thread safe; every plan creation in the process must
// hold this lock.
std::mutex& planner_mutex();

// k-th bin frequency of an n-point transform at sample rate fs (fftfreq order).
inline double bin_freq_hz(std::size_t k, std::size_t n, double fs_hz) {
    const double idx = (k < n / 2) ? static_cast<double>(k)
                                   : static_cast<double>(k) - static_cast<double>(n);
    return idx * fs_hz / static_cast<double>(n);
}

} // namespace dmxci::fft
