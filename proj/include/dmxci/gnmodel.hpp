#pragma once

#include "dmxci/topology.hpp"
#include "dmxci/txsignal.hpp"

#include <vector>

namespace dmxci {

// Single-span pump-and-probe scenario for the incoherent GN reference.
// Rectangular PSDs G = P / R_s per channel; bands must be disjoint.
struct GnScenario {
    SpanParams span;
    double cut_freq_hz = 193.9e12;
    double cut_baud_hz = 32e9;
    double cut_power_w = 1e-5;
    double pump_freq_hz = 193.975e12;
    double pump_baud_hz = 32e9;
    double pump_power_w = 1.2589e-3;

    int base_grid = 64;
    int max_refinements = 6;
    double tolerance_db = 0.05;

    static GnScenario from_plan(const SpanParams& span, const ChannelPlan& plan);
};

// XCI power [W] on the CUT after one span: numeric GN reference double
// integral over the two pump islands, evaluated at the CUT center and
// accumulated locally-white over the CUT band. Grid doubles until two
// successive refinements agree within tolerance_db.
double xci_single_span_w(const GnScenario& scn);

struct IgnTracePoint {
    std::size_t span_index = 0; // 1-based
    double p_span_w = 0.0;      // this span's contribution
    double p_cum_w = 0.0;       // running incoherent sum
};

// Per-span IGN trace over a segment: every span contributes independently,
// so the gradient equals the single-span value and DCU settings are ignored.
std::vector<IgnTracePoint> xci_incoherent_trace(const LinkSegment& segment,
                                                const ChannelPlan& plan, int base_grid = 64,
                                                int max_refinements = 6,
                                                double tolerance_db = 0.05);

} // namespace dmxci
