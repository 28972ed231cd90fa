#include "dmxci/topology.hpp"

#include "dmxci/errors.hpp"
#include "dmxci/units.hpp"

#include <cmath>

namespace dmxci {

void SpanParams::validate() const {
    if (!(length_km > 0.0)) throw ConfigError("span length must be > 0 km");
    if (loss_db_per_km < 0.0) throw ConfigError("span loss must be >= 0 dB/km");
    if (gamma_per_w_km < 0.0) throw ConfigError("span gamma must be >= 0 1/(W km)");
}

const std::string& LinkSegment::ols_name(std::size_t stage) const {
    static const std::string empty;
    for (const auto& g : groups)
        if (stage >= g.first_stage && stage < g.first_stage + g.span_count) return g.name;
    return empty;
}

DcuParams dcu_for_residual(const SpanParams& span, double d_res_ps_nm) {
    return DcuParams{d_res_ps_nm - span.dispersion_ps_nm_km * span.length_km};
}

double beta2_from_dispersion(double d_ps_nm_km, double f_ref_hz) {
    const double lambda = wavelength_m(f_ref_hz);
    // D [ps/(nm km)] = 1e-6 s/m^2; result converted to ps^2/km (1e-24 s^2/km).
    const double beta2_s2_m = -d_ps_nm_km * 1e-6 * lambda * lambda /
                              (2.0 * M_PI * kSpeedOfLight_mps);
    return beta2_s2_m * 1e3 * 1e24;
}

double dispersion_from_beta2(double beta2_ps2_km, double f_ref_hz) {
    const double lambda = wavelength_m(f_ref_hz);
    return -beta2_ps2_km * 1e-27 * 2.0 * M_PI * kSpeedOfLight_mps / (lambda * lambda) * 1e6;
}

double effective_length_km(const SpanParams& span) {
    const double alpha = loss_db_to_alpha_per_km(span.loss_db_per_km);
    if (alpha == 0.0) return span.length_km;
    return (1.0 - std::exp(-alpha * span.length_km)) / alpha;
}

double transparency_gain_db(const SpanParams& span) {
    return span.loss_db_per_km * span.length_km;
}

DispersionMap dispersion_map(const LinkSegment& segment) {
    if (segment.stages.empty()) throw ConfigError("dispersion_map: empty segment");
    DispersionMap map;
    map.pre_dcu_ps_nm.reserve(segment.stages.size());
    map.post_dcu_ps_nm.reserve(segment.stages.size());
    double acc = 0.0;
    for (const auto& stage : segment.stages) {
        acc += stage.span.dispersion_ps_nm_km * stage.span.length_km;
        map.pre_dcu_ps_nm.push_back(acc);
        acc += stage.dcu.dcu_dispersion_ps_nm;
        map.post_dcu_ps_nm.push_back(acc);
    }
    return map;
}

void append_ols(LinkSegment& segment, const std::string& name, std::size_t n_spans,
                const SpanParams& span, double d_res_ps_nm, double edfa_gain_db_override) {
    span.validate();
    OlsGroup group{name, segment.stages.size(), n_spans};
    const double gain =
        edfa_gain_db_override >= 0.0 ? edfa_gain_db_override : transparency_gain_db(span);
    for (std::size_t i = 0; i < n_spans; ++i)
        segment.stages.push_back(SpanStage{span, gain, dcu_for_residual(span, d_res_ps_nm)});
    segment.groups.push_back(group);
}

} // namespace dmxci
