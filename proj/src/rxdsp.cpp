#include "dmxci/rxdsp.hpp"

#include "dmxci/errors.hpp"
#include "dmxci/fft.hpp"
#include "dmxci/units.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dmxci {

void RxConfig::validate() const {
    if (lms_taps < 1) throw ConfigError("lms_taps must be >= 1");
    if (lms_mu < 0.0) throw ConfigError("lms_mu must be >= 0");
    if (samples_per_symbol < 1) throw ConfigError("samples_per_symbol must be >= 1");
    if (cpe_block < 1) throw ConfigError("cpe_block must be >= 1");
    if (discard_symbols < 0) throw ConfigError("discard_symbols must be >= 0");
    if (min_measure_symbols < 1) throw ConfigError("min_measure_symbols must be >= 1");
}

IsolatedSignal isolate_cut(const SampledField& field, double cut_freq_hz, double baud_hz,
                           double rolloff, int sps) {
    const std::size_t m = field.size();
    if (m == 0) throw ConfigError("isolate_cut: empty field");
    const double fs = field.sample_rate_hz;
    const double fs_out = static_cast<double>(sps) * baud_hz;
    const double edge = (1.0 + rolloff) * baud_hz / 2.0;

    const double offset = cut_freq_hz - field.center_freq_hz;
    if (std::abs(offset) + edge > fs / 2.0)
        throw ConfigError("isolate_cut: CUT band clipped by field bandwidth");
    if (edge > fs_out / 2.0)
        throw ConfigError("isolate_cut: equalizer rate below the CUT bandwidth");

    const double bin = fs / static_cast<double>(m);
    const double k0_f = offset / bin;
    const long k0 = std::lround(k0_f);
    if (std::abs(k0_f - static_cast<double>(k0)) > 1e-6)
        throw ConfigError("isolate_cut: CUT offset is not on the FFT bin grid");

    const double mo_f = static_cast<double>(m) * fs_out / fs;
    const std::size_t m_out = static_cast<std::size_t>(std::llround(mo_f));
    if (std::abs(mo_f - static_cast<double>(m_out)) > 1e-6 || m_out == 0 || m_out > m)
        throw ConfigError("isolate_cut: output rate must divide the field grid");

    IsolatedSignal out;
    out.sample_rate_hz = fs_out;
    out.baud_hz = baud_hz;
    out.sps = sps;

    const double scale = static_cast<double>(m_out) / static_cast<double>(m);
    const long lm = static_cast<long>(m);
    auto isolate_pol = [&](const std::vector<cd>& in, std::vector<cd>& res) {
        std::vector<cd> spec = in;
        fft::forward(spec);
        std::vector<cd> sel(m_out, cd(0.0, 0.0));
        for (std::size_t k = 0; k < m_out; ++k) {
            const double f = fft::bin_freq_hz(k, m_out, fs_out);
            if (std::abs(f) > edge) continue;
            const double h = rrc_amplitude(f, baud_hz, rolloff);
            if (h == 0.0) continue;
            const long sk = (k < m_out / 2) ? static_cast<long>(k)
                                            : static_cast<long>(k) - static_cast<long>(m_out);
            const std::size_t src = static_cast<std::size_t>((((sk + k0) % lm) + lm) % lm);
            sel[k] = spec[src] * (h * scale);
        }
        fft::inverse(sel);
        res = std::move(sel);
    };
    isolate_pol(field.x, out.x);
    isolate_pol(field.y, out.y);
    return out;
}

void cdc(IsolatedSignal& signal, const CdcBudget& budget, double f_ref_hz) {
    const std::size_t n = signal.x.size();
    if (n == 0) return;
    if (budget.carrier_ps_nm == 0.0 && budget.center_ps_nm == 0.0) return;
    const double lambda = wavelength_m(f_ref_hz);
    const double base = M_PI * lambda * lambda * 1e-3 / kSpeedOfLight_mps;
    const double c_car = base * budget.carrier_ps_nm;
    const double c_cen = base * budget.center_ps_nm;

    auto compensate = [&](std::vector<cd>& pol) {
        fft::forward(pol);
        for (std::size_t k = 0; k < n; ++k) {
            const double f = fft::bin_freq_hz(k, n, signal.sample_rate_hz);
            const double fc = f + budget.carrier_offset_hz;
            const double phi = -(c_car * f * f + c_cen * fc * fc);
            pol[k] *= cd(std::cos(phi), std::sin(phi));
        }
        fft::inverse(pol);
    };
    compensate(signal.x);
    compensate(signal.y);
}

void cdc(IsolatedSignal& signal, double acc_dispersion_ps_nm, double f_ref_hz) {
    cdc(signal, CdcBudget{acc_dispersion_ps_nm, 0.0, 0.0}, f_ref_hz);
}

void data_aided_align(IsolatedSignal& signal, const std::vector<cd>& ref_x,
                      const std::vector<cd>& ref_y) {
    const std::size_t sps = static_cast<std::size_t>(signal.sps);
    const std::size_t n = std::min(ref_x.size(), signal.x.size() / sps);
    if (n == 0) throw ConfigError("data_aided_align: empty signal");

    // H = (sum u s^H)(sum s s^H)^-1 over symbol-instant samples u and
    // reference symbols s, then the signal is precompensated by H^-1.
    cd us[2][2] = {{0, 0}, {0, 0}};
    cd ss[2][2] = {{0, 0}, {0, 0}};
    for (std::size_t k = 0; k < n; ++k) {
        const cd u0 = signal.x[k * sps], u1 = signal.y[k * sps];
        const cd s0 = ref_x[k], s1 = ref_y[k];
        us[0][0] += u0 * std::conj(s0);
        us[0][1] += u0 * std::conj(s1);
        us[1][0] += u1 * std::conj(s0);
        us[1][1] += u1 * std::conj(s1);
        ss[0][0] += s0 * std::conj(s0);
        ss[0][1] += s0 * std::conj(s1);
        ss[1][0] += s1 * std::conj(s0);
        ss[1][1] += s1 * std::conj(s1);
    }
    const cd det_ss = ss[0][0] * ss[1][1] - ss[0][1] * ss[1][0];
    if (std::abs(det_ss) == 0.0)
        throw NumericError("data_aided_align: degenerate reference");
    const cd h00 = (us[0][0] * ss[1][1] - us[0][1] * ss[1][0]) / det_ss;
    const cd h01 = (us[0][1] * ss[0][0] - us[0][0] * ss[0][1]) / det_ss;
    const cd h10 = (us[1][0] * ss[1][1] - us[1][1] * ss[1][0]) / det_ss;
    const cd h11 = (us[1][1] * ss[0][0] - us[1][0] * ss[0][1]) / det_ss;

    // The fitted one-tap model must explain a non-trivial share of the
    // captured power, otherwise there is no CUT to align to.
    double explained = 0.0, captured = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const cd m0 = h00 * ref_x[k] + h01 * ref_y[k];
        const cd m1 = h10 * ref_x[k] + h11 * ref_y[k];
        explained += std::norm(m0) + std::norm(m1);
        captured += std::norm(signal.x[k * sps]) + std::norm(signal.y[k * sps]);
    }
    if (captured <= 0.0 || explained < 1e-4 * captured)
        throw NumericError("data_aided_align: no CUT signal to align");

    const cd det = h00 * h11 - h01 * h10;
    const double scale2 = std::norm(h00) + std::norm(h01) + std::norm(h10) + std::norm(h11);
    if (std::abs(det) < 1e-9 * (scale2 + 1e-30))
        throw NumericError("data_aided_align: polarization channel is singular");
    const cd i00 = h11 / det, i01 = -h01 / det, i10 = -h10 / det, i11 = h00 / det;
    for (std::size_t k = 0; k < signal.x.size(); ++k) {
        const cd vx = signal.x[k], vy = signal.y[k];
        signal.x[k] = i00 * vx + i01 * vy;
        signal.y[k] = i10 * vx + i11 * vy;
    }
}

EqualizedSymbols lms_equalize(const IsolatedSignal& signal, const std::vector<cd>& ref_x,
                              const std::vector<cd>& ref_y, const RxConfig& cfg) {
    cfg.validate();
    const std::size_t length = signal.x.size();
    const std::size_t sps = static_cast<std::size_t>(signal.sps);
    const std::size_t n_sym = length / sps;
    if (n_sym * sps != length || n_sym == 0)
        throw ConfigError("lms_equalize: signal length must be a multiple of sps");
    if (ref_x.size() != n_sym || ref_y.size() != n_sym)
        throw ConfigError("lms_equalize: reference length mismatch");
    const std::size_t taps = static_cast<std::size_t>(cfg.lms_taps);
    if (taps >= length) throw ConfigError("lms_equalize: more taps than samples");

    const std::size_t n_measure =
        std::max<std::size_t>(static_cast<std::size_t>(cfg.min_measure_symbols), n_sym);
    const std::size_t n_total = static_cast<std::size_t>(cfg.discard_symbols) + n_measure;
    const std::size_t delay = taps / 2;

    std::vector<cd> wxx(taps, 0.0), wxy(taps, 0.0), wyx(taps, 0.0), wyy(taps, 0.0);
    wxx[delay] = 1.0;
    wyy[delay] = 1.0;

    EqualizedSymbols out;
    out.x.reserve(n_measure);
    out.y.reserve(n_measure);
    out.ref_idx.reserve(n_measure);

    const double mu = cfg.lms_mu;
    constexpr std::size_t kWindow = 1024;
    double win_acc = 0.0, prev_win = -1.0;

    for (std::size_t n = 0; n < n_total; ++n) {
        const std::size_t ref = n % n_sym;
        const long llen = static_cast<long>(length);
        const long base = static_cast<long>(ref * sps + delay); // cyclic input position
        cd yx(0.0, 0.0), yy(0.0, 0.0);
        for (std::size_t t = 0; t < taps; ++t) {
            long idx = base - static_cast<long>(t);
            if (idx < 0) idx += llen;
            if (idx >= llen) idx -= llen;
            const cd ux = signal.x[static_cast<std::size_t>(idx)];
            const cd uy = signal.y[static_cast<std::size_t>(idx)];
            yx += wxx[t] * ux + wxy[t] * uy;
            yy += wyx[t] * ux + wyy[t] * uy;
        }
        const cd ex = ref_x[ref] - yx;
        const cd ey = ref_y[ref] - yy;
        if (mu > 0.0) {
            for (std::size_t t = 0; t < taps; ++t) {
                long idx = base - static_cast<long>(t);
                if (idx < 0) idx += llen;
                if (idx >= llen) idx -= llen;
                const cd cux = std::conj(signal.x[static_cast<std::size_t>(idx)]);
                const cd cuy = std::conj(signal.y[static_cast<std::size_t>(idx)]);
                wxx[t] += mu * ex * cux;
                wxy[t] += mu * ex * cuy;
                wyx[t] += mu * ey * cux;
                wyy[t] += mu * ey * cuy;
            }
        }

        win_acc += std::norm(ex) + std::norm(ey);
        if ((n + 1) % kWindow == 0) {
            const double win = win_acc / static_cast<double>(kWindow);
            if (!std::isfinite(win) || (prev_win >= 0.0 && win > 10.0 * prev_win && win > 1e-3))
                throw NumericError("lms_equalize: equalizer diverged at symbol " +
                                   std::to_string(n));
            prev_win = win;
            win_acc = 0.0;
        }

        if (n >= static_cast<std::size_t>(cfg.discard_symbols)) {
            out.x.push_back(yx);
            out.y.push_back(yy);
            out.ref_idx.push_back(ref);
        }
    }
    return out;
}

void cpe(EqualizedSymbols& symbols, const std::vector<cd>& ref_x,
         const std::vector<cd>& ref_y, int block) {
    if (block < 1) throw ConfigError("cpe: block must be >= 1");
    const std::size_t n = symbols.x.size();
    const std::size_t b = static_cast<std::size_t>(block);
    for (std::size_t start = 0; start < n; start += b) {
        const std::size_t stop = std::min(start + b, n);
        cd acc(0.0, 0.0);
        for (std::size_t i = start; i < stop; ++i) {
            acc += symbols.x[i] * std::conj(ref_x[symbols.ref_idx[i]]);
            acc += symbols.y[i] * std::conj(ref_y[symbols.ref_idx[i]]);
        }
        if (acc == cd(0.0, 0.0)) continue;
        const double theta = std::arg(acc);
        const cd rot(std::cos(-theta), std::sin(-theta));
        for (std::size_t i = start; i < stop; ++i) {
            symbols.x[i] *= rot;
            symbols.y[i] *= rot;
        }
    }
}

RxResult evm_snr(const EqualizedSymbols& symbols, const std::vector<cd>& ref_x,
                 const std::vector<cd>& ref_y, double snr_cap_db) {
    const std::size_t n = symbols.x.size();
    if (n == 0) throw ConfigError("evm_snr: no symbols");
    double err = 0.0, sig = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = symbols.ref_idx[i];
        err += std::norm(symbols.x[i] - ref_x[r]) + std::norm(symbols.y[i] - ref_y[r]);
        sig += std::norm(ref_x[r]) + std::norm(ref_y[r]);
    }
    RxResult res;
    res.symbols_processed = n;
    res.evm = std::sqrt(err / sig);
    res.snr_db = (res.evm > 0.0) ? std::min(snr_cap_db, -20.0 * std::log10(res.evm))
                                 : snr_cap_db;
    return res;
}

XciMeasurement measure_xci(const SampledField& field, const ChannelPlan& plan,
                           const SymbolReference& reference, double line_acc_dispersion_ps_nm,
                           const RxConfig& cfg) {
    IsolatedSignal iso =
        isolate_cut(field, plan.cut_freq_hz(), plan.baud_hz(), plan.rolloff,
                    cfg.samples_per_symbol);
    const CdcBudget budget{plan.predistortion_ps_nm, line_acc_dispersion_ps_nm,
                           plan.cut_freq_hz() - field.center_freq_hz};
    cdc(iso, budget, plan.cut_freq_hz());
    data_aided_align(iso, reference.cut_x, reference.cut_y);
    EqualizedSymbols eq = lms_equalize(iso, reference.cut_x, reference.cut_y, cfg);
    cpe(eq, reference.cut_x, reference.cut_y, cfg.cpe_block);
    RxResult rx = evm_snr(eq, reference.cut_x, reference.cut_y, cfg.snr_cap_db);
    rx.cdc_total_ps_nm = budget.total_ps_nm();

    XciMeasurement m;
    m.rx = rx;
    m.snr_xci_db = rx.snr_db;
    m.p_xci_w = dbm_to_watt(plan.cut_power_dbm) / db_to_linear(rx.snr_db);
    return m;
}

} // namespace dmxci
