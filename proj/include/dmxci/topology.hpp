#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace dmxci {

// One fiber span. Dispersion may carry either sign; loss and gamma are
// non-negative and the length strictly positive.
struct SpanParams {
    double length_km = 80.0;
    double loss_db_per_km = 0.2;
    double dispersion_ps_nm_km = 16.0;
    double gamma_per_w_km = 1.27;

    void validate() const;
};

// Purely linear dispersion-compensation unit: applies chromatic dispersion
// only, no loss, no Kerr effect.
struct DcuParams {
    double dcu_dispersion_ps_nm = 0.0;
};

// Span followed by its lumped EDFA and DCU, in propagation order.
struct SpanStage {
    SpanParams span;
    double edfa_gain_db = 0.0;
    DcuParams dcu;
};

struct OlsGroup {
    std::string name;
    std::size_t first_stage = 0;
    std::size_t span_count = 0;
};

// Ordered cascade of spans grouped into named OLSs; stage order is
// propagation order and N_s is the total stage count.
struct LinkSegment {
    std::vector<SpanStage> stages;
    std::vector<OlsGroup> groups;

    std::size_t span_count() const { return stages.size(); }
    // Name of the OLS containing 0-based stage i ("" when ungrouped).
    const std::string& ols_name(std::size_t stage) const;
};

// Accumulated dispersion sampled after each fiber (pre-DCU) and after each
// DCU (post-DCU); post-DCU values of a periodic map form the k*D_RES floor.
struct DispersionMap {
    std::vector<double> pre_dcu_ps_nm;
    std::vector<double> post_dcu_ps_nm;
};

// DCU value producing residual dispersion d_res after the span: D_RES = D L + D_DCU.
DcuParams dcu_for_residual(const SpanParams& span, double d_res_ps_nm);

// GVD coefficient [ps^2/km] from D [ps/(nm km)] at reference frequency f_ref;
// positive (anomalous) D maps to negative beta2.
double beta2_from_dispersion(double d_ps_nm_km, double f_ref_hz);

// Inverse of beta2_from_dispersion.
double dispersion_from_beta2(double beta2_ps2_km, double f_ref_hz);

// L_eff = (1 - exp(-alpha L)) / alpha with alpha the 1/km power attenuation;
// equals L for a lossless span.
double effective_length_km(const SpanParams& span);

// EDFA gain [dB] that exactly recovers the span loss.
double transparency_gain_db(const SpanParams& span);

DispersionMap dispersion_map(const LinkSegment& segment);

// Appends n identical stages to the segment as a named OLS, with DCUs set for
// the requested per-span residual and EDFAs at transparency unless an explicit
// gain is given.
void append_ols(LinkSegment& segment, const std::string& name, std::size_t n_spans,
                const SpanParams& span, double d_res_ps_nm,
                double edfa_gain_db_override = -1.0);

} // namespace dmxci
