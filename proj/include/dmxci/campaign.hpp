#pragma once

#include "dmxci/analysis.hpp"
#include "dmxci/gnmodel.hpp"
#include "dmxci/rxdsp.hpp"
#include "dmxci/ssfm.hpp"
#include "dmxci/topology.hpp"
#include "dmxci/txsignal.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dmxci {

enum class Scale { desk, full };
std::size_t symbols_for_scale(Scale scale);

struct GnSettings {
    int base_grid = 64;
    int max_refinements = 6;
    double tolerance_db = 0.05;
};

// One runnable scenario: a segment, a channel plan, and a measurement mode.
// PRBS seeds are expanded deterministically from the master seed, identically
// for every scenario sharing it.
struct ScenarioSpec {
    std::string id;
    LinkSegment segment;
    ChannelPlan plan;
    TraceMode mode = TraceMode::cumulative;
    std::size_t n_symbols = 8192;
    double sample_rate_hz = 0.0; // 0 = derive from the plan
    StepPolicy policy;
    RxConfig rx;
    GnSettings gn;
    std::uint64_t master_seed = 1;
    std::string snapshot_dir; // non-empty: dump per-tap fields (cumulative mode)
};

PrbsSeeds derive_seeds(std::uint64_t master_seed, int prbs_degree);

// Runs one scenario: cumulative propagates once with full Kerr and receives at
// every tap; intrinsic re-propagates with a single-span Kerr mask per span;
// ign delegates to the GN integrator. SSFM modes also run the Kerr-off line
// once to report the per-tap measurement floor.
XciTrace run_scenario(const ScenarioSpec& spec);

struct CorrelationRecord {
    std::string id;
    double d_fiber_ps_nm_km = 0.0;
    double d_res_ps_nm = 0.0;
    int pump_multiple = 2;
    double baud_gbaud = 0.0;
    double theta_eff_value = 0.0;
    CorrelationSet set;
};

struct ScenarioError {
    std::string id;
    std::string message;
};

struct CampaignResult {
    std::vector<XciTrace> traces;
    std::vector<CorrelationRecord> correlations;
    std::vector<ScenarioError> errors;
};

// Paper experiment matrix: the six D1/D_RES panels at 32 GBaud with the pump
// two grid slots away (full-segment cumulative/intrinsic/ign plus OLS2-only
// cumulative), then the coherency-coefficient extraction at pump multiples
// two and four. One failing scenario is recorded and does not abort the rest.
struct MatrixParams {
    double span_length_km = 80.0;
    double loss_db_per_km = 0.2;
    double gamma_per_w_km = 1.27;
    std::size_t ols1_spans = 10;
    std::size_t ols2_spans = 20;
    std::vector<double> d_values{4.0, 16.0};     // D1; D2 is the swapped partner
    std::vector<double> d_res_values{40.0, 80.0, 160.0};
    double baud_rate_gbaud = 32.0;
    double grid_spacing_ghz = 37.5;
    double cut_freq_thz = 193.9;
    double cut_power_dbm = -20.0;
    double pump_power_dbm = 1.0;
    double predistortion_ps_nm = 102400.0;
    double rolloff = 0.1;
    int prbs_degree = 17;
    Scale scale = Scale::desk;
    StepPolicy policy;
    RxConfig rx;
    GnSettings gn;
    std::uint64_t seed = 1;
};

std::vector<ScenarioSpec> paper_matrix_scenarios(const MatrixParams& params);
CampaignResult run_paper_matrix(const MatrixParams& params, int workers);

// Runs a list of scenarios on a bounded worker pool; results keep list order.
// Failures land in `errors` and leave an empty trace slot behind.
CampaignResult run_scenarios(const std::vector<ScenarioSpec>& specs, int workers);

} // namespace dmxci
