#include "dmxci/field.hpp"

#include "dmxci/fft.hpp"
#include "dmxci/prbs.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>

using namespace dmxci;

namespace {
SampledField random_field(std::size_t n, std::uint64_t seed) {
    SampledField f;
    f.sample_rate_hz = 256e9;
    f.center_freq_hz = 193.9e12;
    f.x.resize(n);
    f.y.resize(n);
    std::uint64_t s = seed;
    auto u = [&]() { return static_cast<double>(splitmix64(s) >> 11) / 9007199254740992.0 - 0.5; };
    for (std::size_t i = 0; i < n; ++i) {
        f.x[i] = cd(u(), u());
        f.y[i] = cd(u(), u());
    }
    return f;
}

double max_abs_diff(const std::vector<cd>& a, const std::vector<cd>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double peak_abs(const std::vector<cd>& a) {
    double m = 0.0;
    for (const auto& v : a) m = std::max(m, std::abs(v));
    return m;
}
} // namespace

TEST_CASE("fft forward/inverse round trip and bin frequencies") {
    std::vector<cd> v(1024);
    std::uint64_t s = 7;
    for (auto& c : v)
        c = cd(static_cast<double>(splitmix64(s) % 1000) - 500.0,
               static_cast<double>(splitmix64(s) % 1000) - 500.0);
    const std::vector<cd> orig = v;
    fft::forward(v);
    fft::inverse(v);
    CHECK(max_abs_diff(v, orig) < 1e-10 * peak_abs(orig));

    CHECK(fft::bin_freq_hz(0, 8, 80.0) == doctest::Approx(0.0));
    CHECK(fft::bin_freq_hz(1, 8, 80.0) == doctest::Approx(10.0));
    CHECK(fft::bin_freq_hz(4, 8, 80.0) == doctest::Approx(-40.0));
    CHECK(fft::bin_freq_hz(7, 8, 80.0) == doctest::Approx(-10.0));

    // a pure tone at +f lands on the positive bin (engineering convention)
    std::vector<cd> tone(64);
    for (std::size_t n = 0; n < 64; ++n) {
        const double ph = 2.0 * M_PI * 5.0 * static_cast<double>(n) / 64.0;
        tone[n] = cd(std::cos(ph), std::sin(ph));
    }
    fft::forward(tone);
    CHECK(std::abs(tone[5]) == doctest::Approx(64.0));
}

TEST_CASE("apply_dispersion round trip, identity and unitarity") {
    SampledField f = random_field(4096, 42);
    const SampledField orig = f;
    const double f_ref = 193.9e12;

    apply_dispersion(f, 102400.0, f_ref);
    double e0 = 0.0, e1 = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        e0 += std::norm(orig.x[i]) + std::norm(orig.y[i]);
        e1 += std::norm(f.x[i]) + std::norm(f.y[i]);
    }
    CHECK(std::abs(e1 - e0) < 1e-12 * e0);

    apply_dispersion(f, -102400.0, f_ref);
    CHECK(max_abs_diff(f.x, orig.x) < 1e-10 * peak_abs(orig.x));
    CHECK(max_abs_diff(f.y, orig.y) < 1e-10 * peak_abs(orig.y));

    SampledField g = orig;
    apply_dispersion(g, 0.0, f_ref);
    CHECK(max_abs_diff(g.x, orig.x) == 0.0);
}

TEST_CASE("dispersion about an offset carrier composes with the centered one") {
    // H depends only on (f + offset); two equal offsets must commute/compose.
    SampledField f = random_field(2048, 3);
    std::vector<cd> a = f.x;
    apply_dispersion(a, f.sample_rate_hz, 500.0, 37.5e9, 193.9e12);
    apply_dispersion(a, f.sample_rate_hz, -500.0, 37.5e9, 193.9e12);
    CHECK(max_abs_diff(a, f.x) < 1e-10 * peak_abs(f.x));
}

TEST_CASE("snapshot file round trip") {
    SampledField f = random_field(512, 9);
    const std::string path = "/tmp/dmxci_test_snapshot.dmxf";
    write_field_snapshot(path, f);
    const SampledField g = read_field_snapshot(path);
    REQUIRE(g.size() == f.size());
    CHECK(g.sample_rate_hz == f.sample_rate_hz);
    CHECK(g.center_freq_hz == f.center_freq_hz);
    // float32 payload
    CHECK(max_abs_diff(g.x, f.x) < 1e-6);
    std::remove(path.c_str());
}
