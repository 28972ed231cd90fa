#pragma once

#include "dmxci/campaign.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dmxci {

struct OlsConfig {
    std::string name = "OLS1";
    std::size_t spans = 10;
    SpanParams span;
    double edfa_gain_db = -1.0; // < 0 means transparency
};

struct SegmentConfig {
    std::vector<OlsConfig> ols;
    double d_res_ps_nm = 40.0;
};

struct ChannelConfig {
    double cut_freq_thz = 193.9;
    double grid_spacing_ghz = 37.5;
    int pump_grid_multiple = 2;
    double baud_rate_gbaud = 32.0;
    double cut_power_dbm = -20.0;
    double pump_power_dbm = 1.0;
    double predistortion_ps_nm = 102400.0;
    double rolloff = 0.1;
    int prbs_degree = 17;
    double sample_rate_gsps = 0.0; // 0 = auto
};

struct SsfmConfig {
    double step_km = 0.1;
    std::string scheme = "symmetrized";
    double max_nonlinear_phase_rad = 0.0;
};

struct CampaignConfig {
    std::string scale = "desk";
    std::uint64_t seed = 1;
};

struct OutputConfig {
    std::string directory = "out";
    std::string prefix = "xci";
};

// Full configuration document. Unknown keys anywhere are rejected; every
// field has the paper's desk-scale default.
struct AppConfig {
    SegmentConfig segment;
    ChannelConfig channels;
    SsfmConfig ssfm;
    RxConfig rx;
    GnSettings gn;
    CampaignConfig campaign;
    OutputConfig output;

    void validate() const;
};

AppConfig default_config();
AppConfig parse_config(const std::string& json_text, const std::string& origin = "config");
AppConfig load_config(const std::string& path);
std::string dump_config(const AppConfig& cfg); // canonical round-trippable JSON

// FNV-1a over the canonical science-relevant config (output paths excluded,
// seed reported separately); 16 hex digits.
std::string config_hash(const AppConfig& cfg);

LinkSegment build_segment(const SegmentConfig& cfg);
ChannelPlan build_plan(const ChannelConfig& cfg);
StepPolicy build_policy(const SsfmConfig& cfg);
Scale parse_scale(const std::string& name);

// Scenario for the configured segment/plan in one mode; the id is derived
// from the physical parameters.
ScenarioSpec scenario_from_config(const AppConfig& cfg, TraceMode mode);

// Matrix parameters taking scale/seed/rx/ssfm/gn/channel settings and the
// span geometry from the config; the D1/D_RES grid stays the paper grid.
MatrixParams matrix_from_config(const AppConfig& cfg);

} // namespace dmxci
