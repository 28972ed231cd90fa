#pragma once

#include "dmxci/field.hpp"
#include "dmxci/topology.hpp"

#include <vector>

namespace dmxci {

enum class SsfmScheme { symmetrized, simple };

// Split-step control. step_km sets the uniform step; when
// max_nonlinear_phase_rad > 0 the step is tightened per span so the peak
// per-step nonlinear rotation stays below that bound.
struct StepPolicy {
    double step_km = 0.1;
    double max_nonlinear_phase_rad = 0.0;
    SsfmScheme scheme = SsfmScheme::symmetrized;

    void validate() const;
};

// Per-stage Kerr switch: gamma is active only where the mask is true.
using KerrMask = std::vector<bool>;

KerrMask mask_all(std::size_t n, bool value);
KerrMask mask_single(std::size_t n, std::size_t active_stage);

// Dual-polarization Manakov propagation over one span. With kerr_on the span
// is integrated by split steps; without it the closed-form linear transfer
// (loss plus full-span dispersion) is applied in one shot, which the stepped
// integrator reproduces within rounding when gamma vanishes.
void propagate_span(SampledField& field, const SpanParams& span, bool kerr_on,
                    const StepPolicy& policy, double f_ref_hz);

// Receives the field right after each stage's DCU (post-EDFA, post-DCU).
struct TapSink {
    virtual ~TapSink() = default;
    // stage is 0-based; line_acc_dispersion_ps_nm is the deterministic
    // dispersion accumulated about the field center up to and including this
    // stage's DCU.
    virtual void on_tap(std::size_t stage, const SampledField& field,
                        double line_acc_dispersion_ps_nm) = 0;
};

// Propagates through stages [0, up_to_stage]; EDFAs are noiseless amplitude
// scalers and DCUs pure dispersion elements. up_to_stage defaults to the last.
void run_link(SampledField& field, const LinkSegment& segment, const KerrMask& mask,
              const StepPolicy& policy, double f_ref_hz, TapSink& sink,
              std::size_t up_to_stage = static_cast<std::size_t>(-1));

// Convenience sink keeping every snapshot.
struct PropagationRecord : TapSink {
    std::vector<SampledField> snapshots;
    std::vector<double> line_acc_ps_nm;
    void on_tap(std::size_t, const SampledField& field, double acc) override {
        snapshots.push_back(field);
        line_acc_ps_nm.push_back(acc);
    }
};

} // namespace dmxci
