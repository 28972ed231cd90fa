#include "dmxci/gnmodel.hpp"

#include "dmxci/errors.hpp"
#include "dmxci/units.hpp"

#include <cmath>
#include <map>

namespace dmxci {

GnScenario GnScenario::from_plan(const SpanParams& span, const ChannelPlan& plan) {
    GnScenario s;
    s.span = span;
    s.cut_freq_hz = plan.cut_freq_hz();
    s.cut_baud_hz = plan.baud_hz();
    s.cut_power_w = dbm_to_watt(plan.cut_power_dbm);
    s.pump_freq_hz = plan.pump_freq_hz();
    s.pump_baud_hz = plan.baud_hz();
    s.pump_power_w = plan.has_pump() ? dbm_to_watt(plan.pump_power_dbm) : 0.0;
    return s;
}

namespace {

// Midpoint-rule pass over the (f1 in CUT band) x (f2 in pump band) island at
// f = f_cut; the mirror island contributes the degeneracy factor 2 and the
// third spectral factor f1+f2-f must itself fall inside the pump band.
double island_integral(const GnScenario& scn, int n) {
    const double alpha = loss_db_to_alpha_per_km(scn.span.loss_db_per_km); // 1/km
    const double beta2_s2_km =
        beta2_from_dispersion(scn.span.dispersion_ps_nm_km, scn.cut_freq_hz) * 1e-24;
    const double length = scn.span.length_km;
    const double f = scn.cut_freq_hz;

    const double cut_half = scn.cut_baud_hz / 2.0;
    const double pump_half = scn.pump_baud_hz / 2.0;
    const double d1 = scn.cut_baud_hz / static_cast<double>(n);
    const double d2 = scn.pump_baud_hz / static_cast<double>(n);
    const double att = std::exp(-alpha * length);

    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double f1 = f - cut_half + (i + 0.5) * d1;
        const double df1 = f1 - f;
        for (int j = 0; j < n; ++j) {
            const double f2 = scn.pump_freq_hz - pump_half + (j + 0.5) * d2;
            const double f3 = f1 + f2 - f;
            if (std::abs(f3 - scn.pump_freq_hz) > pump_half) continue;
            const double dbeta = 4.0 * M_PI * M_PI * beta2_s2_km * df1 * (f2 - f); // 1/km
            const double theta = dbeta * length;
            const double num = 1.0 - 2.0 * att * std::cos(theta) + att * att;
            const double den = alpha * alpha + dbeta * dbeta;
            double kernel; // km^2
            if (den < 1e-30)
                kernel = length * length;
            else
                kernel = num / den;
            acc += kernel;
        }
    }
    return acc * d1 * d2;
}

} // namespace

double xci_single_span_w(const GnScenario& scn) {
    scn.span.validate();
    const double sep = std::abs(scn.pump_freq_hz - scn.cut_freq_hz);
    if (sep < (scn.cut_baud_hz + scn.pump_baud_hz) / 2.0)
        throw ConfigError("GN scenario: CUT and pump bands must be disjoint");
    if (scn.pump_power_w <= 0.0) return 0.0;

    const double g_cut = scn.cut_power_w / scn.cut_baud_hz;
    const double g_pump = scn.pump_power_w / scn.pump_baud_hz;
    const double gamma = scn.span.gamma_per_w_km;
    const double prefactor = (16.0 / 27.0) * gamma * gamma * 2.0 * g_cut * g_pump * g_pump;

    int n = scn.base_grid;
    double prev = prefactor * island_integral(scn, n) * scn.cut_baud_hz;
    for (int r = 0; r < scn.max_refinements; ++r) {
        n *= 2;
        const double cur = prefactor * island_integral(scn, n) * scn.cut_baud_hz;
        const double delta_db = std::abs(10.0 * std::log10(cur / prev));
        if (delta_db < scn.tolerance_db) return cur;
        prev = cur;
    }
    throw NumericError("GN integration did not converge within the refinement budget");
}

std::vector<IgnTracePoint> xci_incoherent_trace(const LinkSegment& segment,
                                                const ChannelPlan& plan, int base_grid,
                                                int max_refinements, double tolerance_db) {
    std::vector<IgnTracePoint> trace;
    trace.reserve(segment.span_count());
    // Identical spans appear many times; integrate each distinct one once.
    std::map<std::tuple<double, double, double, double>, double> cache;
    double cum = 0.0;
    for (std::size_t i = 0; i < segment.span_count(); ++i) {
        const SpanParams& span = segment.stages[i].span;
        const auto key = std::make_tuple(span.length_km, span.loss_db_per_km,
                                         span.dispersion_ps_nm_km, span.gamma_per_w_km);
        auto it = cache.find(key);
        if (it == cache.end()) {
            GnScenario scn = GnScenario::from_plan(span, plan);
            scn.base_grid = base_grid;
            scn.max_refinements = max_refinements;
            scn.tolerance_db = tolerance_db;
            it = cache.emplace(key, xci_single_span_w(scn)).first;
        }
        cum += it->second;
        trace.push_back(IgnTracePoint{i + 1, it->second, cum});
    }
    return trace;
}

} // namespace dmxci
