#include "dmxci/rxdsp.hpp"

#include "dmxci/errors.hpp"
#include "dmxci/fft.hpp"
#include "dmxci/prbs.hpp"
#include "dmxci/units.hpp"

#include <doctest.h>

#include "helpers.hpp"

#include <cmath>

using namespace dmxci;
using namespace testutil;

namespace {

// Deterministic unit Gaussian pairs (Box-Muller over splitmix64 uniforms).
struct Gauss {
    std::uint64_t s;
    explicit Gauss(std::uint64_t seed) : s(seed) {}
    double uniform() {
        return (static_cast<double>(splitmix64(s) >> 11) + 0.5) / 9007199254740992.0;
    }
    cd next() {
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double t = 2.0 * M_PI * uniform();
        return cd(r * std::cos(t), r * std::sin(t));
    }
};

WdmSignal b2b_signal(std::size_t n_sym, bool with_pump, double predistortion = 0.0) {
    ChannelPlan plan = small_plan();
    plan.predistortion_ps_nm = predistortion;
    if (!with_pump) plan.pump_power_dbm = -std::numeric_limits<double>::infinity();
    return build_wdm(plan, n_sym, default_sample_rate_hz(plan));
}

} // namespace

TEST_CASE("isolate_cut: flat-band content passes with exact energy") {
    // Tones inside the flat RRC region: |H| = 1, so time-averaged power over
    // one cyclic period is preserved through shift+resample.
    SampledField f;
    f.sample_rate_hz = 256e9;
    f.center_freq_hz = 193.9375e12;
    const std::size_t m = 8192;
    f.x.assign(m, cd(0, 0));
    f.y.assign(m, cd(0, 0));
    const double bin = f.sample_rate_hz / static_cast<double>(m);
    const double cut_off = -37.5e9; // CUT below the field center
    for (long dk : {-100L, -7L, 0L, 13L, 250L}) { // all within +-12.8 GHz of the CUT
        const long k = std::lround(cut_off / bin) + dk;
        const std::size_t ix = static_cast<std::size_t>((k + static_cast<long>(m)) % m);
        const std::size_t iy = static_cast<std::size_t>((k + 5 + static_cast<long>(m)) % m);
        for (std::size_t n = 0; n < m; ++n) {
            const double phx = 2.0 * M_PI * static_cast<double>(ix) * n / m;
            const double phy = 2.0 * M_PI * static_cast<double>(iy) * n / m;
            f.x[n] += 0.3 * cd(std::cos(phx), std::sin(phx));
            f.y[n] += 0.1 * cd(std::cos(phy), std::sin(phy));
        }
    }
    const double p_in = f.average_power_w();
    IsolatedSignal iso = isolate_cut(f, 193.9e12, 32e9, 0.1, 2);
    double p_out = 0.0;
    for (std::size_t i = 0; i < iso.x.size(); ++i)
        p_out += std::norm(iso.x[i]) + std::norm(iso.y[i]);
    p_out /= static_cast<double>(iso.x.size());
    CHECK(p_out == doctest::Approx(p_in).epsilon(1e-9));
    CHECK(iso.sample_rate_hz == doctest::Approx(64e9));
}

TEST_CASE("isolate_cut: pump-only field is rejected to numerical zero") {
    ChannelPlan plan = small_plan();
    plan.cut_power_dbm = -std::numeric_limits<double>::infinity();
    // build the pump alone by treating it as the only channel
    const auto sx = map_qam16(prbs_bits(17, 7, 4 * 512));
    const auto sy = map_qam16(prbs_bits(17, 8, 4 * 512));
    SampledField f = shape_channel(sx, sy, 32e9, 0.1, 37.5e9, 1.0, 256e9, 0.0, 193.9e12);
    f.center_freq_hz = 193.9375e12; // pump at +37.5 GHz, CUT band empty

    IsolatedSignal iso = isolate_cut(f, 193.9e12, 32e9, 0.1, 2);
    double p_out = 0.0;
    for (std::size_t i = 0; i < iso.x.size(); ++i)
        p_out += std::norm(iso.x[i]) + std::norm(iso.y[i]);
    p_out /= static_cast<double>(iso.x.size());
    CHECK(p_out < 1e-6 * f.average_power_w()); // brick wall: exactly zero numerically
}

TEST_CASE("cdc round trip and identity") {
    WdmSignal sig = b2b_signal(256, false);
    IsolatedSignal iso = isolate_cut(sig.field, small_plan().cut_freq_hz(), 32e9, 0.1, 2);
    const IsolatedSignal orig = iso;

    apply_dispersion(iso.x, iso.sample_rate_hz, 800.0, 0.0, 193.9e12);
    apply_dispersion(iso.y, iso.sample_rate_hz, 800.0, 0.0, 193.9e12);
    cdc(iso, 800.0, 193.9e12);
    double m = 0.0;
    for (std::size_t i = 0; i < iso.x.size(); ++i)
        m = std::max({m, std::abs(iso.x[i] - orig.x[i]), std::abs(iso.y[i] - orig.y[i])});
    CHECK(m < 1e-10);

    const IsolatedSignal before = iso;
    cdc(iso, 0.0, 193.9e12); // zero total: identity
    for (std::size_t i = 0; i < iso.x.size(); ++i) CHECK(iso.x[i] == before.x[i]);
}

TEST_CASE("full data-aided chain reaches the numeric floor back-to-back") {
    WdmSignal sig = b2b_signal(1024, true, 102400.0);
    RxConfig rx = small_rx();
    const XciMeasurement m =
        measure_xci(sig.field, small_plan(), sig.reference, 0.0, rx);
    CHECK(m.snr_xci_db >= 40.0);
    CHECK(m.p_xci_w == doctest::Approx(dbm_to_watt(-20.0) / db_to_linear(m.snr_xci_db)));
}

TEST_CASE("LMS converges to the swapped butterfly on swapped polarizations") {
    WdmSignal sig = b2b_signal(1024, false);
    ChannelPlan plan = small_plan();
    plan.predistortion_ps_nm = 0.0; // matches the built signal
    RxConfig rx = small_rx();

    const XciMeasurement ref = measure_xci(sig.field, plan, sig.reference, 0.0, rx);

    std::swap(sig.field.x, sig.field.y);
    const XciMeasurement swapped = measure_xci(sig.field, plan, sig.reference, 0.0, rx);
    CHECK(swapped.snr_xci_db >= 40.0);
    CHECK(std::abs(swapped.snr_xci_db - ref.snr_xci_db) < 0.1);
}

TEST_CASE("mu = 0 freezes the equalizer at the center-tap identity") {
    WdmSignal sig = b2b_signal(512, false);
    IsolatedSignal iso = isolate_cut(sig.field, small_plan().cut_freq_hz(), 32e9, 0.1, 2);
    data_aided_align(iso, sig.reference.cut_x, sig.reference.cut_y);
    RxConfig rx = small_rx();
    rx.lms_mu = 0.0;
    rx.discard_symbols = 0;
    rx.min_measure_symbols = 512;
    const EqualizedSymbols eq = lms_equalize(iso, sig.reference.cut_x, sig.reference.cut_y, rx);
    for (std::size_t i = 0; i < 16; ++i) {
        CHECK(eq.x[i] == iso.x[2 * i]);
        CHECK(eq.y[i] == iso.y[2 * i]);
    }
}

TEST_CASE("CPE removes global and per-block rotations") {
    const auto ref = map_qam16(prbs_bits(17, 3, 4 * 512));
    EqualizedSymbols eq;
    eq.x = ref;
    eq.y = ref;
    eq.ref_idx.resize(ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) eq.ref_idx[i] = i;

    // global rotation exp(i pi/7)
    const cd rot(std::cos(M_PI / 7), std::sin(M_PI / 7));
    for (auto& v : eq.x) v *= rot;
    for (auto& v : eq.y) v *= rot;
    cpe(eq, ref, ref, 64);
    RxResult r = evm_snr(eq, ref, ref, 60.0);
    CHECK(r.snr_db == doctest::Approx(60.0));

    // random per-block phases vanish as well
    std::uint64_t s = 99;
    for (std::size_t b = 0; b < ref.size(); b += 64) {
        const double th = 2.0 * M_PI * (static_cast<double>(splitmix64(s) >> 11) / 9007199254740992.0);
        const cd br(std::cos(th), std::sin(th));
        for (std::size_t i = b; i < b + 64; ++i) {
            eq.x[i] *= br;
            eq.y[i] *= br;
        }
    }
    cpe(eq, ref, ref, 64);
    r = evm_snr(eq, ref, ref, 60.0);
    CHECK(r.snr_db == doctest::Approx(60.0));
}

TEST_CASE("EVM/SNR definition and the AWGN cross-check") {
    const auto ref = map_qam16(prbs_bits(17, 5, 4 * 8192));
    EqualizedSymbols eq;
    eq.x = ref;
    eq.y = ref;
    eq.ref_idx.resize(ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) eq.ref_idx[i] = i;

    CHECK(evm_snr(eq, ref, ref, 60.0).snr_db == doctest::Approx(60.0)); // exact match capped

    // noise pinned to exactly EVM 0.1 -> 20 dB by construction
    Gauss g2(321);
    std::vector<cd> nx(ref.size()), ny(ref.size());
    double err = 0.0, sig = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        nx[i] = g2.next();
        ny[i] = g2.next();
        err += std::norm(nx[i]) + std::norm(ny[i]);
        sig += 2.0 * std::norm(ref[i]);
    }
    const double scale = 0.1 * std::sqrt(sig / err);
    for (std::size_t i = 0; i < ref.size(); ++i) {
        eq.x[i] = ref[i] + scale * nx[i];
        eq.y[i] = ref[i] + scale * ny[i];
    }
    const RxResult r01 = evm_snr(eq, ref, ref, 60.0);
    CHECK(r01.evm == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(std::abs(r01.snr_db - 20.0) < 1e-6);

    // AWGN of known mean power 1e-3 per pol -> 30 +- 0.1 dB over 2^13 symbols
    Gauss g3(77);
    const double amp = std::sqrt(1e-3 / 2.0); // E|g|^2 = 2
    for (std::size_t i = 0; i < ref.size(); ++i) {
        eq.x[i] = ref[i] + amp * g3.next();
        eq.y[i] = ref[i] + amp * g3.next();
    }
    const RxResult r = evm_snr(eq, ref, ref, 60.0);
    CHECK(std::abs(r.snr_db - 30.0) < 0.1);
}

TEST_CASE("equalizer divergence detection aborts") {
    WdmSignal sig = b2b_signal(512, false);
    IsolatedSignal iso = isolate_cut(sig.field, small_plan().cut_freq_hz(), 32e9, 0.1, 2);
    data_aided_align(iso, sig.reference.cut_x, sig.reference.cut_y);
    RxConfig rx = small_rx();
    rx.lms_mu = 4.0; // mean-unstable: any residual error grows exponentially
    CHECK_THROWS_AS(lms_equalize(iso, sig.reference.cut_x, sig.reference.cut_y, rx),
                    NumericError);
}
