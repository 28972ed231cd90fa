#include "dmxci/txsignal.hpp"

#include "dmxci/errors.hpp"
#include "dmxci/fft.hpp"
#include "dmxci/prbs.hpp"
#include "dmxci/units.hpp"

#include <doctest.h>

#include <cmath>

using namespace dmxci;

TEST_CASE("prbs-17 is maximal length and deterministic") {
    // 2^17-1 is prime, so any period dividing it is 1 or the full length;
    // a non-constant sequence repeating at 131071 is therefore maximal.
    const std::size_t period = 131071;
    Prbs gen(17, 0x155AA);
    const auto bits = gen.bits(2 * period);
    bool has0 = false, has1 = false;
    bool repeats = true;
    for (std::size_t i = 0; i < period; ++i) {
        has0 |= bits[i] == 0;
        has1 |= bits[i] == 1;
        repeats &= bits[i] == bits[i + period];
    }
    CHECK(has0);
    CHECK(has1);
    CHECK(repeats);

    CHECK(prbs_bits(17, 12345, 4096) == prbs_bits(17, 12345, 4096));
    CHECK_THROWS_AS(Prbs(17, 0), ConfigError);
    CHECK_THROWS_AS(Prbs(8, 1), ConfigError);
}

TEST_CASE("two seeds give cyclic shifts of the same m-sequence") {
    const std::uint32_t seed_a = 0x00001, seed_b = 0x1F3A7;
    Prbs probe(17, seed_a);
    std::size_t shift = 0;
    while (probe.state() != seed_b) {
        probe.next_bit();
        ++shift;
        REQUIRE(shift < (1u << 17));
    }
    const auto a = prbs_bits(17, seed_a, 4096 + shift);
    const auto b = prbs_bits(17, seed_b, 4096);
    bool same_at_zero = true;
    for (std::size_t i = 0; i < 4096; ++i) {
        CHECK(b[i] == a[i + shift]);
        same_at_zero &= b[i] == a[i];
    }
    CHECK_FALSE(same_at_zero);
}

TEST_CASE("16-QAM Gray map: normalization and documented corner") {
    const auto s = map_qam16({0, 0, 0, 0});
    CHECK(s[0].real() == doctest::Approx(-3.0 / std::sqrt(10.0)));
    CHECK(s[0].imag() == doctest::Approx(-3.0 / std::sqrt(10.0)));

    // full constellation sweep has exactly unit average energy
    std::vector<std::uint8_t> bits;
    for (int v = 0; v < 16; ++v)
        for (int b = 3; b >= 0; --b) bits.push_back(static_cast<std::uint8_t>((v >> b) & 1));
    const auto sweep = map_qam16(bits);
    REQUIRE(sweep.size() == 16);
    double e = 0.0;
    for (const auto& c : sweep) e += std::norm(c);
    CHECK(e / 16.0 == doctest::Approx(1.0).epsilon(1e-12));

    CHECK(map_qam16(std::vector<std::uint8_t>(4 * 100, 1)).size() == 100);
    CHECK_THROWS_AS(map_qam16({0, 1, 0}), ConfigError);
}

TEST_CASE("shape_channel calibrates power and confines the spectrum") {
    ChannelPlan plan;
    const std::size_t n_sym = 512;
    const auto sx = map_qam16(prbs_bits(17, 11, 4 * n_sym));
    const auto sy = map_qam16(prbs_bits(17, 22, 4 * n_sym));
    const double fs = 256e9;

    SampledField f = shape_channel(sx, sy, 32e9, 0.1, 0.0, -20.0, fs, 0.0, 193.9e12);
    CHECK(watt_to_dbm(f.average_power_w()) == doctest::Approx(-20.0).epsilon(1e-6));

    // 99% of the energy within the (1+rolloff) R_s band
    std::vector<cd> spec = f.x;
    fft::forward(spec);
    double inside = 0.0, total = 0.0;
    for (std::size_t k = 0; k < spec.size(); ++k) {
        const double fr = fft::bin_freq_hz(k, spec.size(), fs);
        const double p = std::norm(spec[k]);
        total += p;
        if (std::abs(fr) <= 1.1 * 32e9 / 2.0) inside += p;
    }
    CHECK(inside / total > 0.99);

    // frequency placement: peaks at +-75 GHz
    SampledField up = shape_channel(sx, sy, 32e9, 0.1, 75e9, 0.0, fs, 0.0, 193.9e12);
    SampledField dn = shape_channel(sx, sy, 32e9, 0.1, -75e9, 0.0, fs, 0.0, 193.9e12);
    auto band_power = [&](const SampledField& g, double lo, double hi) {
        std::vector<cd> sp = g.x;
        fft::forward(sp);
        double acc = 0.0;
        for (std::size_t k = 0; k < sp.size(); ++k) {
            const double fr = fft::bin_freq_hz(k, sp.size(), fs);
            if (fr >= lo && fr <= hi) acc += std::norm(sp[k]);
        }
        return acc;
    };
    CHECK(band_power(up, 55e9, 95e9) > 100.0 * band_power(up, -95e9, -55e9));
    CHECK(band_power(dn, -95e9, -55e9) > 100.0 * band_power(dn, 55e9, 95e9));

    CHECK_THROWS_AS(shape_channel(sx, sy, 32e9, 0.1, 120e9, 0.0, fs, 0.0, 193.9e12),
                    ConfigError);
}

TEST_CASE("build_wdm: power addition, determinism, pump-off spectrum") {
    ChannelPlan plan;
    plan.seeds = PrbsSeeds{101, 202, 303, 404};
    const std::size_t n_sym = 512;
    const double fs = default_sample_rate_hz(plan);
    CHECK(fs == doctest::Approx(256e9));

    const WdmSignal a = build_wdm(plan, n_sym, fs);
    const double total_w = a.field.average_power_w();
    CHECK(total_w == doctest::Approx(dbm_to_watt(1.0) + dbm_to_watt(-20.0)).epsilon(1e-9));

    const WdmSignal b = build_wdm(plan, n_sym, fs);
    bool identical = true;
    for (std::size_t i = 0; i < a.field.size(); ++i)
        identical &= a.field.x[i] == b.field.x[i] && a.field.y[i] == b.field.y[i];
    CHECK(identical);

    ChannelPlan cut_only = plan;
    cut_only.pump_power_dbm = -std::numeric_limits<double>::infinity();
    const WdmSignal c = build_wdm(cut_only, n_sym, fs);
    std::vector<cd> spec = c.field.x;
    fft::forward(spec);
    double out_band = 0.0, in_band = 0.0;
    for (std::size_t k = 0; k < spec.size(); ++k) {
        const double fr = fft::bin_freq_hz(k, spec.size(), fs);
        // CUT sits at -offset/2 from the field center
        if (std::abs(fr + 37.5e9) <= 1.1 * 16e9)
            in_band += std::norm(spec[k]);
        else
            out_band += std::norm(spec[k]);
    }
    CHECK(in_band > 0.0);
    CHECK(out_band < 1e-20 * in_band);

    CHECK_THROWS_AS(build_wdm(plan, 1000, fs), ConfigError); // not a power of two
}

TEST_CASE("default sample rate for the 64 GBaud plans") {
    ChannelPlan plan;
    plan.baud_rate_gbaud = 64.0;
    plan.grid_spacing_ghz = 75.0;
    plan.pump_offset_ghz = 150.0;
    CHECK(default_sample_rate_hz(plan) == doctest::Approx(512e9));
    plan.pump_offset_ghz = 300.0;
    CHECK(default_sample_rate_hz(plan) == doctest::Approx(1024e9));
}
