#include "dmxci/config.hpp"

#include "dmxci/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace dmxci {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& known,
                    const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
    for (const auto& [key, value] : j.items())
        if (!known.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

template <typename T>
void get_to(const json& j, const char* key, T& out) {
    if (j.contains(key)) {
        try {
            j.at(key).get_to(out);
        } catch (const json::exception& e) {
            throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
        }
    }
}

OlsConfig parse_ols(const json& j, const std::string& where) {
    reject_unknown(j, {"name", "spans", "length_km", "loss_db_per_km",
                       "dispersion_ps_nm_km", "gamma_per_w_km", "edfa_gain_db"},
                   where);
    OlsConfig ols;
    get_to(j, "name", ols.name);
    get_to(j, "spans", ols.spans);
    get_to(j, "length_km", ols.span.length_km);
    get_to(j, "loss_db_per_km", ols.span.loss_db_per_km);
    get_to(j, "dispersion_ps_nm_km", ols.span.dispersion_ps_nm_km);
    get_to(j, "gamma_per_w_km", ols.span.gamma_per_w_km);
    get_to(j, "edfa_gain_db", ols.edfa_gain_db);
    return ols;
}

std::string fmt_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

} // namespace

void AppConfig::validate() const {
    if (segment.ols.empty()) throw ConfigError("segment needs at least one OLS");
    for (const auto& o : segment.ols) {
        o.span.validate();
        if (o.spans == 0) throw ConfigError("OLS '" + o.name + "' has zero spans");
    }
    build_plan(channels).validate();
    build_policy(ssfm).validate();
    rx.validate();
    if (gn.base_grid < 2) throw ConfigError("gn.base_grid must be >= 2");
    if (gn.max_refinements < 1) throw ConfigError("gn.max_refinements must be >= 1");
    if (gn.tolerance_db <= 0.0) throw ConfigError("gn.tolerance_db must be > 0");
    parse_scale(campaign.scale);
}

AppConfig default_config() {
    AppConfig cfg;
    cfg.segment.ols.push_back(OlsConfig{"OLS1", 10, SpanParams{80.0, 0.2, 4.0, 1.27}, -1.0});
    cfg.segment.ols.push_back(OlsConfig{"OLS2", 20, SpanParams{80.0, 0.2, 16.0, 1.27}, -1.0});
    return cfg;
}

AppConfig parse_config(const std::string& json_text, const std::string& origin) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(origin + ": invalid JSON: " + e.what());
    }
    reject_unknown(j, {"segment", "channels", "ssfm", "rx", "gn", "campaign", "output"},
                   origin);

    AppConfig cfg = default_config();
    if (j.contains("segment")) {
        const json& js = j["segment"];
        reject_unknown(js, {"ols", "d_res_ps_nm"}, "segment");
        if (js.contains("ols")) {
            if (!js["ols"].is_array() || js["ols"].empty())
                throw ConfigError("segment.ols must be a non-empty array");
            cfg.segment.ols.clear();
            std::size_t idx = 0;
            for (const auto& jo : js["ols"])
                cfg.segment.ols.push_back(parse_ols(jo, "segment.ols[" + std::to_string(idx++) + "]"));
        }
        get_to(js, "d_res_ps_nm", cfg.segment.d_res_ps_nm);
    }
    if (j.contains("channels")) {
        const json& jc = j["channels"];
        reject_unknown(jc, {"cut_freq_thz", "grid_spacing_ghz", "pump_grid_multiple",
                            "baud_rate_gbaud", "cut_power_dbm", "pump_power_dbm",
                            "predistortion_ps_nm", "rolloff", "prbs_degree",
                            "sample_rate_gsps"},
                       "channels");
        get_to(jc, "cut_freq_thz", cfg.channels.cut_freq_thz);
        get_to(jc, "grid_spacing_ghz", cfg.channels.grid_spacing_ghz);
        get_to(jc, "pump_grid_multiple", cfg.channels.pump_grid_multiple);
        get_to(jc, "baud_rate_gbaud", cfg.channels.baud_rate_gbaud);
        get_to(jc, "cut_power_dbm", cfg.channels.cut_power_dbm);
        get_to(jc, "pump_power_dbm", cfg.channels.pump_power_dbm);
        get_to(jc, "predistortion_ps_nm", cfg.channels.predistortion_ps_nm);
        get_to(jc, "rolloff", cfg.channels.rolloff);
        get_to(jc, "prbs_degree", cfg.channels.prbs_degree);
        get_to(jc, "sample_rate_gsps", cfg.channels.sample_rate_gsps);
    }
    if (j.contains("ssfm")) {
        const json& js = j["ssfm"];
        reject_unknown(js, {"step_km", "scheme", "max_nonlinear_phase_rad"}, "ssfm");
        get_to(js, "step_km", cfg.ssfm.step_km);
        get_to(js, "scheme", cfg.ssfm.scheme);
        get_to(js, "max_nonlinear_phase_rad", cfg.ssfm.max_nonlinear_phase_rad);
    }
    if (j.contains("rx")) {
        const json& jr = j["rx"];
        reject_unknown(jr, {"lms_taps", "lms_mu", "samples_per_symbol", "cpe_block",
                            "discard_symbols", "min_measure_symbols", "snr_cap_db"},
                       "rx");
        get_to(jr, "lms_taps", cfg.rx.lms_taps);
        get_to(jr, "lms_mu", cfg.rx.lms_mu);
        get_to(jr, "samples_per_symbol", cfg.rx.samples_per_symbol);
        get_to(jr, "cpe_block", cfg.rx.cpe_block);
        get_to(jr, "discard_symbols", cfg.rx.discard_symbols);
        get_to(jr, "min_measure_symbols", cfg.rx.min_measure_symbols);
        get_to(jr, "snr_cap_db", cfg.rx.snr_cap_db);
    }
    if (j.contains("gn")) {
        const json& jg = j["gn"];
        reject_unknown(jg, {"base_grid", "max_refinements", "tolerance_db"}, "gn");
        get_to(jg, "base_grid", cfg.gn.base_grid);
        get_to(jg, "max_refinements", cfg.gn.max_refinements);
        get_to(jg, "tolerance_db", cfg.gn.tolerance_db);
    }
    if (j.contains("campaign")) {
        const json& jc = j["campaign"];
        reject_unknown(jc, {"scale", "seed"}, "campaign");
        get_to(jc, "scale", cfg.campaign.scale);
        get_to(jc, "seed", cfg.campaign.seed);
    }
    if (j.contains("output")) {
        const json& jo = j["output"];
        reject_unknown(jo, {"directory", "prefix"}, "output");
        get_to(jo, "directory", cfg.output.directory);
        get_to(jo, "prefix", cfg.output.prefix);
    }
    cfg.validate();
    return cfg;
}

AppConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

namespace {

json science_json(const AppConfig& cfg) {
    json j;
    json ols = json::array();
    for (const auto& o : cfg.segment.ols)
        ols.push_back({{"name", o.name},
                       {"spans", o.spans},
                       {"length_km", o.span.length_km},
                       {"loss_db_per_km", o.span.loss_db_per_km},
                       {"dispersion_ps_nm_km", o.span.dispersion_ps_nm_km},
                       {"gamma_per_w_km", o.span.gamma_per_w_km},
                       {"edfa_gain_db", o.edfa_gain_db}});
    j["segment"] = {{"ols", ols}, {"d_res_ps_nm", cfg.segment.d_res_ps_nm}};
    j["channels"] = {{"cut_freq_thz", cfg.channels.cut_freq_thz},
                     {"grid_spacing_ghz", cfg.channels.grid_spacing_ghz},
                     {"pump_grid_multiple", cfg.channels.pump_grid_multiple},
                     {"baud_rate_gbaud", cfg.channels.baud_rate_gbaud},
                     {"cut_power_dbm", cfg.channels.cut_power_dbm},
                     {"pump_power_dbm", cfg.channels.pump_power_dbm},
                     {"predistortion_ps_nm", cfg.channels.predistortion_ps_nm},
                     {"rolloff", cfg.channels.rolloff},
                     {"prbs_degree", cfg.channels.prbs_degree},
                     {"sample_rate_gsps", cfg.channels.sample_rate_gsps}};
    j["ssfm"] = {{"step_km", cfg.ssfm.step_km},
                 {"scheme", cfg.ssfm.scheme},
                 {"max_nonlinear_phase_rad", cfg.ssfm.max_nonlinear_phase_rad}};
    j["rx"] = {{"lms_taps", cfg.rx.lms_taps},
               {"lms_mu", cfg.rx.lms_mu},
               {"samples_per_symbol", cfg.rx.samples_per_symbol},
               {"cpe_block", cfg.rx.cpe_block},
               {"discard_symbols", cfg.rx.discard_symbols},
               {"min_measure_symbols", cfg.rx.min_measure_symbols},
               {"snr_cap_db", cfg.rx.snr_cap_db}};
    j["gn"] = {{"base_grid", cfg.gn.base_grid},
               {"max_refinements", cfg.gn.max_refinements},
               {"tolerance_db", cfg.gn.tolerance_db}};
    j["campaign"] = {{"scale", cfg.campaign.scale}};
    return j;
}

} // namespace

std::string dump_config(const AppConfig& cfg) {
    json j = science_json(cfg);
    j["campaign"]["seed"] = cfg.campaign.seed;
    j["output"] = {{"directory", cfg.output.directory}, {"prefix", cfg.output.prefix}};
    return j.dump(2);
}

std::string config_hash(const AppConfig& cfg) {
    const std::string canon = science_json(cfg).dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : canon) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

LinkSegment build_segment(const SegmentConfig& cfg) {
    LinkSegment seg;
    for (const auto& o : cfg.ols)
        append_ols(seg, o.name, o.spans, o.span, cfg.d_res_ps_nm, o.edfa_gain_db);
    return seg;
}

ChannelPlan build_plan(const ChannelConfig& cfg) {
    ChannelPlan plan;
    plan.cut_freq_thz = cfg.cut_freq_thz;
    plan.grid_spacing_ghz = cfg.grid_spacing_ghz;
    plan.pump_offset_ghz = cfg.pump_grid_multiple * cfg.grid_spacing_ghz;
    plan.baud_rate_gbaud = cfg.baud_rate_gbaud;
    plan.cut_power_dbm = cfg.cut_power_dbm;
    plan.pump_power_dbm = cfg.pump_power_dbm;
    plan.predistortion_ps_nm = cfg.predistortion_ps_nm;
    plan.rolloff = cfg.rolloff;
    plan.prbs_degree = cfg.prbs_degree;
    return plan;
}

StepPolicy build_policy(const SsfmConfig& cfg) {
    StepPolicy p;
    p.step_km = cfg.step_km;
    p.max_nonlinear_phase_rad = cfg.max_nonlinear_phase_rad;
    if (cfg.scheme == "symmetrized")
        p.scheme = SsfmScheme::symmetrized;
    else if (cfg.scheme == "simple")
        p.scheme = SsfmScheme::simple;
    else
        throw ConfigError("ssfm.scheme must be 'symmetrized' or 'simple'");
    return p;
}

Scale parse_scale(const std::string& name) {
    if (name == "desk") return Scale::desk;
    if (name == "full") return Scale::full;
    throw ConfigError("campaign.scale must be 'desk' or 'full'");
}

ScenarioSpec scenario_from_config(const AppConfig& cfg, TraceMode mode) {
    ScenarioSpec spec;
    std::string id;
    for (const auto& o : cfg.segment.ols) id += "d" + fmt_num(o.span.dispersion_ps_nm_km);
    id += "_res" + fmt_num(cfg.segment.d_res_ps_nm) + "_rs" +
          fmt_num(cfg.channels.baud_rate_gbaud) + "_p" +
          std::to_string(cfg.channels.pump_grid_multiple) + "_cfg";
    spec.id = id;
    spec.segment = build_segment(cfg.segment);
    spec.plan = build_plan(cfg.channels);
    spec.mode = mode;
    spec.n_symbols = symbols_for_scale(parse_scale(cfg.campaign.scale));
    spec.sample_rate_hz = cfg.channels.sample_rate_gsps * 1e9;
    spec.policy = build_policy(cfg.ssfm);
    spec.rx = cfg.rx;
    spec.gn = cfg.gn;
    spec.master_seed = cfg.campaign.seed;
    return spec;
}

MatrixParams matrix_from_config(const AppConfig& cfg) {
    MatrixParams p;
    const OlsConfig& first = cfg.segment.ols.front();
    p.span_length_km = first.span.length_km;
    p.loss_db_per_km = first.span.loss_db_per_km;
    p.gamma_per_w_km = first.span.gamma_per_w_km;
    p.ols1_spans = first.spans;
    p.ols2_spans = cfg.segment.ols.size() > 1 ? cfg.segment.ols[1].spans : 2 * first.spans;
    p.baud_rate_gbaud = cfg.channels.baud_rate_gbaud;
    p.grid_spacing_ghz = cfg.channels.grid_spacing_ghz;
    p.cut_freq_thz = cfg.channels.cut_freq_thz;
    p.cut_power_dbm = cfg.channels.cut_power_dbm;
    p.pump_power_dbm = cfg.channels.pump_power_dbm;
    p.predistortion_ps_nm = cfg.channels.predistortion_ps_nm;
    p.rolloff = cfg.channels.rolloff;
    p.prbs_degree = cfg.channels.prbs_degree;
    p.scale = parse_scale(cfg.campaign.scale);
    p.policy = build_policy(cfg.ssfm);
    p.rx = cfg.rx;
    p.gn = cfg.gn;
    p.seed = cfg.campaign.seed;
    return p;
}

} // namespace dmxci
