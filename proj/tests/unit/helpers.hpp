#pragma once

#include "dmxci/campaign.hpp"
#include "dmxci/rxdsp.hpp"
#include "dmxci/ssfm.hpp"
#include "dmxci/txsignal.hpp"

// Shared reduced-size fixtures so the unit suite stays fast; physics-grade
// sizes live in the acceptance suite.
namespace testutil {

inline dmxci::ChannelPlan small_plan() {
    dmxci::ChannelPlan plan;
    plan.seeds = dmxci::PrbsSeeds{0x0101, 0x0202, 0x0303, 0x0404};
    return plan;
}

inline dmxci::RxConfig small_rx() {
    dmxci::RxConfig rx;
    rx.discard_symbols = 256;
    rx.min_measure_symbols = 1024;
    return rx;
}

inline dmxci::StepPolicy coarse_policy(double step_km = 0.5) {
    dmxci::StepPolicy p;
    p.step_km = step_km;
    return p;
}

inline double max_field_diff(const dmxci::SampledField& a, const dmxci::SampledField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a.x[i] - b.x[i]));
        m = std::max(m, std::abs(a.y[i] - b.y[i]));
    }
    return m;
}

} // namespace testutil
