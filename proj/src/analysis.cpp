#include "dmxci/analysis.hpp"

#include "dmxci/errors.hpp"
#include "dmxci/units.hpp"

#include <algorithm>
#include <cmath>

namespace dmxci {

const char* trace_mode_name(TraceMode mode) {
    switch (mode) {
        case TraceMode::cumulative: return "cumulative";
        case TraceMode::intrinsic: return "intrinsic";
        case TraceMode::ign: return "ign";
    }
    return "?";
}

TraceMode trace_mode_from_name(const std::string& name) {
    if (name == "cumulative") return TraceMode::cumulative;
    if (name == "intrinsic") return TraceMode::intrinsic;
    if (name == "ign") return TraceMode::ign;
    throw ConfigError("unknown trace mode '" + name + "'");
}

std::vector<double> XciTrace::cumulative_w() const {
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(p.p_xci_w);
    return out;
}

std::vector<double> XciTrace::delta_w() const {
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(p.delta_p_w);
    return out;
}

GradientResult gradient(const std::vector<double>& cumulative_w) {
    GradientResult res;
    res.delta_w.reserve(cumulative_w.size());
    double prev = 0.0;
    for (double p : cumulative_w) {
        const double d = p - prev;
        if (d <= 0.0) ++res.nonmonotone_count;
        res.delta_w.push_back(d);
        prev = p;
    }
    return res;
}

std::vector<double> extract_c_lags(const std::vector<double>& delta_w,
                                   const std::vector<double>& sigma2_w) {
    if (delta_w.size() != sigma2_w.size() || delta_w.size() < 2)
        throw ConfigError("extract_c_lags: need matching traces with at least 2 spans");
    double lo = sigma2_w[0], hi = sigma2_w[0], mean = 0.0;
    for (double s : sigma2_w) {
        if (s <= 0.0) throw ConfigError("extract_c_lags: intrinsic powers must be > 0");
        lo = std::min(lo, s);
        hi = std::max(hi, s);
        mean += s;
    }
    mean /= static_cast<double>(sigma2_w.size());
    if (linear_to_db(hi / lo) > 0.5)
        throw ConfigError("extract_c_lags: non-periodic line (intrinsic spread > 0.5 dB)");

    std::vector<double> c(delta_w.size() - 1);
    for (std::size_t l = 1; l < delta_w.size(); ++l)
        c[l - 1] = (delta_w[l] - delta_w[l - 1]) / (2.0 * mean);
    return c;
}

double theta_span(const LinkSegment& segment, std::size_t i, std::size_t j, double baud_hz,
                  double f_ref_hz) {
    if (j > i || i > segment.span_count() || j < 1)
        throw ConfigError("theta_span: need 1 <= j <= i <= N_s");
    double beta_sum_s2 = 0.0;
    for (std::size_t k = j; k < i; ++k) {
        const SpanStage& st = segment.stages[k - 1];
        beta_sum_s2 += acc_dispersion_to_beta_s2(
            st.span.dispersion_ps_nm_km * st.span.length_km + st.dcu.dcu_dispersion_ps_nm,
            f_ref_hz);
    }
    return M_PI * baud_hz * baud_hz * std::abs(beta_sum_s2);
}

double theta_eff(const SpanParams& span, double baud_hz, double f_ref_hz) {
    const double beta2_s2_km =
        beta2_from_dispersion(span.dispersion_ps_nm_km, f_ref_hz) * 1e-24;
    return M_PI * baud_hz * baud_hz * std::abs(beta2_s2_km) * effective_length_km(span);
}

std::vector<ScatterPoint> scatter_points(const CorrelationSet& corr) {
    std::vector<ScatterPoint> out;
    out.reserve(corr.c_lag.size());
    for (std::size_t l = 0; l < corr.c_lag.size(); ++l)
        out.push_back(ScatterPoint{corr.theta_ratio[l], corr.c_lag[l], l + 1});
    return out;
}

AsymptoteResult asymptote(const std::vector<double>& delta_db, std::size_t tail_window) {
    if (tail_window == 0 || delta_db.size() < tail_window)
        throw ConfigError("asymptote: trace shorter than the tail window");
    double level = 0.0;
    std::size_t counted = 0;
    for (std::size_t k = delta_db.size() - tail_window; k < delta_db.size(); ++k) {
        if (!std::isfinite(delta_db[k])) continue;
        level += delta_db[k];
        ++counted;
    }
    if (counted == 0) throw NumericError("asymptote: tail window has no finite gradients");
    level /= static_cast<double>(counted);

    AsymptoteResult res;
    res.level_db = level;
    for (std::size_t start = 0; start < delta_db.size(); ++start) {
        bool stays = true;
        for (std::size_t k = start; k < delta_db.size(); ++k) {
            if (!std::isfinite(delta_db[k]) || std::abs(delta_db[k] - level) > 0.5) {
                stays = false;
                break;
            }
        }
        if (stays) {
            res.settling_index = start + 1;
            break;
        }
    }
    return res;
}

} // namespace dmxci
