#pragma once

#include "dmxci/topology.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dmxci {

enum class TraceMode { cumulative, intrinsic, ign };

const char* trace_mode_name(TraceMode mode);
TraceMode trace_mode_from_name(const std::string& name);

struct TracePoint {
    std::size_t span_index = 0; // 1-based
    double snr_xci_db = 0.0;
    double p_xci_w = 0.0;     // cumulative for cumulative/ign, per-span for intrinsic
    double delta_p_w = 0.0;   // P_i - P_{i-1}, linear
    double floor_snr_db = 0.0;
};

// Per-span XCI record of one scenario in one measurement mode.
struct XciTrace {
    std::string scenario_id;
    TraceMode mode = TraceMode::cumulative;
    std::vector<TracePoint> points;

    std::vector<double> cumulative_w() const;
    std::vector<double> delta_w() const;
};

struct GradientResult {
    std::vector<double> delta_w;
    int nonmonotone_count = 0; // deltas <= 0 are kept but counted
};

// XCI power gradient in linear units, P_0 = 0.
GradientResult gradient(const std::vector<double>& cumulative_w);

// Coherency lags from a periodic line: c_l = (dP_{l+1} - dP_l) / (2 sigma^2),
// with sigma^2 the mean intrinsic per-span power. Rejects non-periodic input
// (intrinsic powers spreading more than 0.5 dB).
std::vector<double> extract_c_lags(const std::vector<double>& delta_w,
                                   const std::vector<double>& sigma2_w);

// Residual-dispersion separation between spans j and i (1-based, j <= i):
// theta = pi R_s^2 |sum_{k=j}^{i-1} (beta2_k L_k + beta_DCU_k)|.
double theta_span(const LinkSegment& segment, std::size_t i, std::size_t j, double baud_hz,
                  double f_ref_hz);

// theta_eff = pi R_s^2 |beta2| L_eff of one span.
double theta_eff(const SpanParams& span, double baud_hz, double f_ref_hz);

struct CorrelationSet {
    std::vector<double> sigma2_w;     // intrinsic per-span powers used
    std::vector<double> c_lag;        // lags 1..N-1
    std::vector<double> theta_ratio;  // theta_span(lag)/theta_eff per lag
};

struct ScatterPoint {
    double theta_ratio = 0.0;
    double c = 0.0;
    std::size_t lag = 0;
};

std::vector<ScatterPoint> scatter_points(const CorrelationSet& corr);

struct AsymptoteResult {
    double level_db = 0.0;
    std::optional<std::size_t> settling_index; // 1-based span, nullopt if never settles
};

// Tail mean of the dB gradients; settling index is the first span from which
// every later gradient stays within 0.5 dB of that level.
AsymptoteResult asymptote(const std::vector<double>& delta_db, std::size_t tail_window);

} // namespace dmxci
