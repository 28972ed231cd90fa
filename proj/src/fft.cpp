#include "dmxci/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>

namespace dmxci::fft {

namespace {

struct PlanEntry {
    fftw_plan plan = nullptr;
    fftw_complex* buf = nullptr; // planning buffer, kept alive for alignment reference
};

std::map<std::pair<std::size_t, int>, PlanEntry>& plan_cache() {
    static std::map<std::pair<std::size_t, int>, PlanEntry> cache;
    return cache;
}

fftw_plan get_plan(std::size_t n, int sign) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    auto& cache = plan_cache();
    auto it = cache.find({n, sign});
    if (it != cache.end()) return it->second.plan;
    PlanEntry e;
    e.buf = fftw_alloc_complex(n);
    e.plan = fftw_plan_dft_1d(static_cast<int>(n), e.buf, e.buf, sign, FFTW_ESTIMATE);
    cache[{n, sign}] = e;
    return e.plan;
}

// Per-thread aligned scratch; fftw_execute_dft requires the same alignment as
// the buffer the plan was created on, which fftw_alloc_complex guarantees.
struct Scratch {
    fftw_complex* buf = nullptr;
    std::size_t cap = 0;
    fftw_complex* get(std::size_t n) {
        if (cap < n) {
            if (buf) fftw_free(buf);
            buf = fftw_alloc_complex(n);
            cap = n;
        }
        return buf;
    }
    ~Scratch() {
        if (buf) fftw_free(buf);
    }
};

void execute(std::vector<cd>& data, int sign) {
    const std::size_t n = data.size();
    if (n == 0) return;
    fftw_plan plan = get_plan(n, sign);
    thread_local Scratch scratch;
    fftw_complex* buf = scratch.get(n);
    std::memcpy(buf, data.data(), n * sizeof(fftw_complex));
    fftw_execute_dft(plan, buf, buf);
    std::memcpy(data.data(), buf, n * sizeof(fftw_complex));
}

} // namespace

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

void forward(std::vector<cd>& data) { execute(data, FFTW_FORWARD); }

void inverse(std::vector<cd>& data) {
    execute(data, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(data.size());
    for (auto& v : data) v *= scale;
}

} // namespace dmxci::fft
