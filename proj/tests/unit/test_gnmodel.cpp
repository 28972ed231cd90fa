#include "dmxci/gnmodel.hpp"

#include "dmxci/errors.hpp"
#include "dmxci/units.hpp"

#include <doctest.h>

#include <cmath>

using namespace dmxci;

namespace {
GnScenario base_scenario(double d_ps_nm_km = 4.0) {
    GnScenario s;
    s.span = SpanParams{80.0, 0.2, d_ps_nm_km, 1.27};
    s.cut_freq_hz = 193.9e12;
    s.cut_baud_hz = 32e9;
    s.cut_power_w = dbm_to_watt(-20.0);
    s.pump_freq_hz = 193.975e12;
    s.pump_baud_hz = 32e9;
    s.pump_power_w = dbm_to_watt(1.0);
    return s;
}
} // namespace

TEST_CASE("integration is grid-stable") {
    GnScenario a = base_scenario();
    const double p1 = xci_single_span_w(a);
    a.base_grid = 128;
    const double p2 = xci_single_span_w(a);
    CHECK(std::abs(linear_to_db(p1 / p2)) < 0.05);
}

TEST_CASE("exact power scaling laws") {
    GnScenario s = base_scenario();
    const double p0 = xci_single_span_w(s);

    GnScenario pump_up = s;
    pump_up.pump_power_w = s.pump_power_w * db_to_linear(1.0);
    CHECK(linear_to_db(xci_single_span_w(pump_up) / p0) == doctest::Approx(2.0).epsilon(1e-9));

    GnScenario cut_up = s;
    cut_up.cut_power_w = s.cut_power_w * 2.0;
    CHECK(xci_single_span_w(cut_up) / p0 == doctest::Approx(2.0).epsilon(1e-9));

    GnScenario gamma_up = s;
    gamma_up.span.gamma_per_w_km = s.span.gamma_per_w_km * 2.0;
    CHECK(xci_single_span_w(gamma_up) / p0 == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("higher dispersion suppresses XCI") {
    const double p_d4 = xci_single_span_w(base_scenario(4.0));
    const double p_d16 = xci_single_span_w(base_scenario(16.0));
    CHECK(p_d16 < p_d4);
    // close to the 1/|beta2| walk-off scaling (4x -> ~6 dB)
    const double margin_db = linear_to_db(p_d4 / p_d16);
    CHECK(margin_db > 4.0);
    CHECK(margin_db < 8.0);
}

TEST_CASE("overlapping bands are rejected") {
    GnScenario s = base_scenario();
    s.pump_freq_hz = s.cut_freq_hz + 20e9;
    CHECK_THROWS_AS(xci_single_span_w(s), ConfigError);
}

TEST_CASE("incoherent trace: linear accumulation, constant gradient, no DCU dependence") {
    ChannelPlan plan;
    LinkSegment seg;
    append_ols(seg, "OLS1", 5, SpanParams{80.0, 0.2, 4.0, 1.27}, 40.0);
    const auto t40 = xci_incoherent_trace(seg, plan);
    REQUIRE(t40.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(t40[i].p_span_w == doctest::Approx(t40[0].p_span_w));
        CHECK(t40[i].p_cum_w ==
              doctest::Approx(static_cast<double>(i + 1) * t40[0].p_span_w).epsilon(1e-12));
    }

    LinkSegment seg160;
    append_ols(seg160, "OLS1", 5, SpanParams{80.0, 0.2, 4.0, 1.27}, 160.0);
    const auto t160 = xci_incoherent_trace(seg160, plan);
    for (std::size_t i = 0; i < 5; ++i) CHECK(t160[i].p_cum_w == t40[i].p_cum_w);

    LinkSegment mixed;
    append_ols(mixed, "OLS1", 2, SpanParams{80.0, 0.2, 4.0, 1.27}, 40.0);
    append_ols(mixed, "OLS2", 3, SpanParams{80.0, 0.2, 16.0, 1.27}, 40.0);
    const auto tm = xci_incoherent_trace(mixed, plan);
    CHECK(tm[0].p_span_w == tm[1].p_span_w);
    CHECK(tm[2].p_span_w == tm[4].p_span_w);
    CHECK(tm[2].p_span_w < tm[0].p_span_w); // two-level step function
}
