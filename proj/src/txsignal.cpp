#include "dmxci/txsignal.hpp"

#include "dmxci/errors.hpp"
#include "dmxci/fft.hpp"
#include "dmxci/prbs.hpp"
#include "dmxci/units.hpp"

#include <cmath>
#include <limits>

namespace dmxci {

bool ChannelPlan::has_pump() const { return pump_power_dbm > -std::numeric_limits<double>::infinity(); }

void ChannelPlan::validate() const {
    if (cut_freq_thz <= 0.0) throw ConfigError("cut_freq_thz must be > 0");
    if (baud_rate_gbaud <= 0.0) throw ConfigError("baud rate must be > 0");
    if (grid_spacing_ghz <= 0.0) throw ConfigError("grid spacing must be > 0");
    if (baud_rate_gbaud >= grid_spacing_ghz)
        throw ConfigError("baud rate must be below the grid spacing");
    if (rolloff < 0.0 || rolloff >= 1.0) throw ConfigError("rolloff must be in [0,1)");
    if (has_pump()) {
        const double mult = std::abs(pump_offset_ghz) / grid_spacing_ghz;
        if (std::abs(mult - std::round(mult)) > 1e-9 || std::round(mult) < 1.0)
            throw ConfigError("pump offset must be a non-zero multiple of the grid spacing");
        const double guard = (1.0 + rolloff) * baud_rate_gbaud;
        if (std::abs(pump_offset_ghz) <= guard)
            throw ConfigError("pump and CUT bands overlap");
    }
}

std::vector<cd> map_qam16(const std::vector<std::uint8_t>& bits) {
    if (bits.size() % 4 != 0) throw ConfigError("16-QAM needs a bit count divisible by 4");
    // Gray code on each rail: 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3.
    static const double level[4] = {-3.0, -1.0, 3.0, 1.0}; // indexed by (b_hi<<1)|b_lo
    const double scale = 1.0 / std::sqrt(10.0);
    std::vector<cd> out(bits.size() / 4);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const int ii = (bits[4 * i] << 1) | bits[4 * i + 1];
        const int qq = (bits[4 * i + 2] << 1) | bits[4 * i + 3];
        out[i] = cd(level[ii] * scale, level[qq] * scale);
    }
    return out;
}

double rrc_amplitude(double f_hz, double baud_hz, double rolloff) {
    const double af = std::abs(f_hz);
    const double flat = (1.0 - rolloff) * baud_hz / 2.0;
    const double edge = (1.0 + rolloff) * baud_hz / 2.0;
    if (af <= flat) return 1.0;
    if (af >= edge) return 0.0;
    const double rc = 0.5 * (1.0 + std::cos(M_PI * (af - flat) / (rolloff * baud_hz)));
    return std::sqrt(rc);
}

double default_sample_rate_hz(const ChannelPlan& plan) {
    const double need = 2.0 * (std::abs(plan.pump_offset_ghz) * 1e9 +
                               (1.0 + plan.rolloff) * plan.baud_hz());
    double fs = plan.baud_hz();
    while (fs < need) fs *= 2.0;
    return fs;
}

namespace {

// Spectrum of the upsampled symbol impulse train is the symbol DFT tiled
// sps times; shaping, predistortion and the carrier shift all happen on it
// before a single inverse transform.
void synthesize_pol(const std::vector<cd>& symbols, std::size_t m, double sample_rate_hz,
                    double baud_hz, double rolloff, double predistortion_ps_nm,
                    long shift_bins, double f_ref_hz, std::vector<cd>& out) {
    const std::size_t n_sym = symbols.size();
    std::vector<cd> sym_spec = symbols;
    fft::forward(sym_spec);

    const double lambda = wavelength_m(f_ref_hz);
    const double coef =
        M_PI * lambda * lambda * (predistortion_ps_nm * 1e-3) / kSpeedOfLight_mps;
    const long lm = static_cast<long>(m);
    const std::size_t shift = static_cast<std::size_t>(((shift_bins % lm) + lm) % lm);

    std::vector<cd> spec(m, cd(0.0, 0.0));
    for (std::size_t k = 0; k < m; ++k) {
        const double f = fft::bin_freq_hz(k, m, sample_rate_hz);
        const double a = rrc_amplitude(f, baud_hz, rolloff);
        if (a == 0.0) continue;
        cd v = sym_spec[k % n_sym] * a;
        if (predistortion_ps_nm != 0.0) {
            const double phi = coef * f * f;
            v *= cd(std::cos(phi), std::sin(phi));
        }
        spec[(k + shift) % m] = v;
    }
    fft::inverse(spec);
    out = std::move(spec);
}

} // namespace

SampledField shape_channel(const std::vector<cd>& symbols_x, const std::vector<cd>& symbols_y,
                           double baud_hz, double rolloff, double offset_hz, double power_dbm,
                           double sample_rate_hz, double predistortion_ps_nm, double f_ref_hz) {
    if (symbols_x.size() != symbols_y.size() || symbols_x.empty())
        throw ConfigError("shape_channel: polarizations must be equal-length and non-empty");
    if ((1.0 + rolloff) * baud_hz + 2.0 * std::abs(offset_hz) >= sample_rate_hz)
        throw ConfigError("shape_channel: channel would alias at this sample rate");
    const double sps_f = sample_rate_hz / baud_hz;
    const std::size_t sps = static_cast<std::size_t>(std::llround(sps_f));
    if (std::abs(sps_f - static_cast<double>(sps)) > 1e-9 || sps < 2)
        throw ConfigError("shape_channel: sample rate must be an integer multiple of the baud rate");

    const std::size_t m = symbols_x.size() * sps;
    const double bin = sample_rate_hz / static_cast<double>(m);
    const double shift_f = offset_hz / bin;
    const long shift_bins = std::lround(shift_f);
    if (std::abs(shift_f - static_cast<double>(shift_bins)) > 1e-6)
        throw ConfigError("shape_channel: channel offset is not on the FFT bin grid");

    SampledField field;
    field.sample_rate_hz = sample_rate_hz;
    synthesize_pol(symbols_x, m, sample_rate_hz, baud_hz, rolloff, predistortion_ps_nm,
                   shift_bins, f_ref_hz, field.x);
    synthesize_pol(symbols_y, m, sample_rate_hz, baud_hz, rolloff, predistortion_ps_nm,
                   shift_bins, f_ref_hz, field.y);

    const double target_w = dbm_to_watt(power_dbm);
    const double measured_w = field.average_power_w();
    if (measured_w <= 0.0) throw NumericError("shape_channel: zero-power waveform");
    scale_amplitude(field, std::sqrt(target_w / measured_w));
    return field;
}

WdmSignal build_wdm(const ChannelPlan& plan, std::size_t n_symbols, double sample_rate_hz) {
    plan.validate();
    if (n_symbols == 0 || (n_symbols & (n_symbols - 1)) != 0)
        throw ConfigError("build_wdm: n_symbols must be a power of two");

    WdmSignal sig;
    const double f_ref = plan.cut_freq_hz();
    const std::size_t bits_per_pol = 4 * n_symbols;

    auto symbols = [&](std::uint32_t seed) {
        return map_qam16(prbs_bits(plan.prbs_degree, seed, bits_per_pol));
    };
    sig.reference.cut_x = symbols(plan.seeds.cut_x);
    sig.reference.cut_y = symbols(plan.seeds.cut_y);

    const double cut_offset_hz = plan.cut_freq_hz() - plan.field_center_hz();
    SampledField cut = shape_channel(sig.reference.cut_x, sig.reference.cut_y, plan.baud_hz(),
                                     plan.rolloff, cut_offset_hz, plan.cut_power_dbm,
                                     sample_rate_hz, plan.predistortion_ps_nm, f_ref);
    sig.field = std::move(cut);
    sig.field.center_freq_hz = plan.field_center_hz();

    if (plan.has_pump()) {
        sig.reference.pump_x = symbols(plan.seeds.pump_x);
        sig.reference.pump_y = symbols(plan.seeds.pump_y);
        const double pump_offset_hz = plan.pump_freq_hz() - plan.field_center_hz();
        SampledField pump = shape_channel(sig.reference.pump_x, sig.reference.pump_y,
                                          plan.baud_hz(), plan.rolloff, pump_offset_hz,
                                          plan.pump_power_dbm, sample_rate_hz,
                                          plan.predistortion_ps_nm, f_ref);
        for (std::size_t i = 0; i < sig.field.size(); ++i) {
            sig.field.x[i] += pump.x[i];
            sig.field.y[i] += pump.y[i];
        }
    }
    return sig;
}

} // namespace dmxci
