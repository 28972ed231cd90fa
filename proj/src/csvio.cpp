#include "dmxci/csvio.hpp"

#include "dmxci/errors.hpp"
#include "dmxci/units.hpp"
#include "dmxci/version.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace dmxci {

namespace {

std::string fmt(const char* f, double v) {
    if (!std::isfinite(v)) return "nan";
    char buf[48];
    std::snprintf(buf, sizeof(buf), f, v);
    return buf;
}

std::string db_of_watt(double w) {
    if (!(w > 0.0)) return "nan";
    return fmt("%.4f", watt_to_dbm(w));
}

std::string prov_header(const char* schema, const Provenance& prov) {
    std::ostringstream os;
    os << "# schema=" << schema << " code=dmxci-" << kVersion << "\n";
    os << "# config_hash=" << prov.config_hash << " seed=" << prov.seed << "\n";
    return os.str();
}

} // namespace

std::string trace_csv(const std::vector<XciTrace>& traces, const Provenance& prov) {
    std::ostringstream os;
    os << prov_header(kTraceSchema, prov);
    os << "scenario_id,mode,span_index,snr_xci_db,p_xci_dbm,delta_p_xci_db,floor_snr_db\n";
    for (const auto& t : traces) {
        for (const auto& p : t.points) {
            os << t.scenario_id << ',' << trace_mode_name(t.mode) << ',' << p.span_index
               << ',' << fmt("%.4f", p.snr_xci_db) << ',' << db_of_watt(p.p_xci_w) << ','
               << db_of_watt(p.delta_p_w) << ',' << fmt("%.4f", p.floor_snr_db) << '\n';
        }
    }
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write file: " + path);
    out << content;
    if (!out) throw ConfigError("failed while writing file: " + path);
}

void write_trace_csv(const std::string& path, const std::vector<XciTrace>& traces,
                     const Provenance& prov) {
    write_text_file(path, trace_csv(traces, prov));
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_field_double(const std::string& s) {
    if (s == "nan") return std::nan("");
    return std::stod(s);
}

} // namespace

TraceFile read_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read trace file: " + path);
    TraceFile file;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto hpos = line.find("config_hash=");
            if (hpos != std::string::npos) {
                std::istringstream ls(line.substr(hpos));
                std::string tok;
                while (ls >> tok) {
                    if (tok.rfind("config_hash=", 0) == 0)
                        file.prov.config_hash = tok.substr(12);
                    else if (tok.rfind("seed=", 0) == 0)
                        file.prov.seed = std::stoull(tok.substr(5));
                }
            }
            continue;
        }
        if (!header_seen) {
            if (line !=
                "scenario_id,mode,span_index,snr_xci_db,p_xci_dbm,delta_p_xci_db,floor_snr_db")
                throw ConfigError(path + ": unexpected trace CSV header");
            header_seen = true;
            continue;
        }
        const auto cells = split_csv_line(line);
        if (cells.size() != 7) throw ConfigError(path + ": malformed trace row: " + line);
        const std::string& id = cells[0];
        const TraceMode mode = trace_mode_from_name(cells[1]);
        if (file.traces.empty() || file.traces.back().scenario_id != id ||
            file.traces.back().mode != mode) {
            XciTrace t;
            t.scenario_id = id;
            t.mode = mode;
            file.traces.push_back(t);
        }
        TracePoint p;
        p.span_index = std::stoul(cells[2]);
        p.snr_xci_db = parse_field_double(cells[3]);
        const double p_dbm = parse_field_double(cells[4]);
        p.p_xci_w = std::isfinite(p_dbm) ? dbm_to_watt(p_dbm) : 0.0;
        const double d_dbm = parse_field_double(cells[5]);
        p.delta_p_w = std::isfinite(d_dbm) ? dbm_to_watt(d_dbm) : 0.0;
        p.floor_snr_db = parse_field_double(cells[6]);
        file.traces.back().points.push_back(p);
    }
    if (!header_seen) throw ConfigError(path + ": not a trace CSV");
    return file;
}

std::string scatter_csv(const std::vector<CorrelationRecord>& records, const Provenance& prov) {
    std::ostringstream os;
    os << prov_header(kScatterSchema, prov);
    os << "scenario_id,d_ps_nm_km,d_res_ps_nm,pump_multiple,lag,theta_span,theta_eff,"
          "theta_ratio,c_lag\n";
    for (const auto& r : records) {
        for (std::size_t l = 0; l < r.set.c_lag.size(); ++l) {
            const double ratio = r.set.theta_ratio[l];
            os << r.id << ',' << fmt("%g", r.d_fiber_ps_nm_km) << ','
               << fmt("%g", r.d_res_ps_nm) << ',' << r.pump_multiple << ',' << (l + 1) << ','
               << fmt("%.6e", ratio * r.theta_eff_value) << ','
               << fmt("%.6e", r.theta_eff_value) << ',' << fmt("%.6f", ratio) << ','
               << fmt("%.6e", r.set.c_lag[l]) << '\n';
        }
    }
    return os.str();
}

void write_scatter_csv(const std::string& path, const std::vector<CorrelationRecord>& records,
                       const Provenance& prov) {
    write_text_file(path, scatter_csv(records, prov));
}

std::string dispersion_map_csv(const LinkSegment& segment, const Provenance& prov) {
    std::ostringstream os;
    os << prov_header(kDispMapSchema, prov);
    os << "stage_index,ols,pre_dcu_ps_nm,post_dcu_ps_nm\n";
    if (segment.stages.empty()) return os.str();
    const DispersionMap map = dispersion_map(segment);
    for (std::size_t i = 0; i < segment.stages.size(); ++i) {
        os << (i + 1) << ',' << segment.ols_name(i) << ',' << fmt("%.4f", map.pre_dcu_ps_nm[i])
           << ',' << fmt("%.4f", map.post_dcu_ps_nm[i]) << '\n';
    }
    return os.str();
}

void write_dispersion_map_csv(const std::string& path, const LinkSegment& segment,
                              const Provenance& prov) {
    write_text_file(path, dispersion_map_csv(segment, prov));
}

std::string summary_json(const CampaignResult& result, const Provenance& prov,
                         std::size_t asymptote_tail) {
    nlohmann::ordered_json j;
    j["schema"] = kSummarySchema;
    j["code_version"] = kVersion;
    j["config_hash"] = prov.config_hash;
    j["seed"] = prov.seed;

    nlohmann::ordered_json scenarios = nlohmann::ordered_json::array();
    for (const auto& t : result.traces) {
        if (t.points.empty()) continue;
        nlohmann::ordered_json js;
        js["scenario_id"] = t.scenario_id;
        js["mode"] = trace_mode_name(t.mode);
        js["spans"] = t.points.size();
        std::vector<double> delta_db;
        double floor_min = std::numeric_limits<double>::infinity();
        for (const auto& p : t.points) {
            delta_db.push_back(p.delta_p_w > 0.0 ? watt_to_dbm(p.delta_p_w)
                                                 : std::nan(""));
            if (std::isfinite(p.floor_snr_db)) floor_min = std::min(floor_min, p.floor_snr_db);
        }
        const std::size_t tail = std::min(asymptote_tail, delta_db.size());
        try {
            const AsymptoteResult a = asymptote(delta_db, tail);
            js["asymptote_level_db"] = a.level_db;
            if (a.settling_index)
                js["settling_index"] = *a.settling_index;
            else
                js["settling_index"] = nullptr;
        } catch (const std::exception&) {
            js["asymptote_level_db"] = nullptr;
            js["settling_index"] = nullptr;
        }
        js["final_snr_xci_db"] = t.points.back().snr_xci_db;
        if (std::isfinite(floor_min)) js["floor_min_snr_db"] = floor_min;
        scenarios.push_back(js);
    }
    j["scenarios"] = scenarios;

    nlohmann::ordered_json correlations = nlohmann::ordered_json::array();
    for (const auto& r : result.correlations) {
        nlohmann::ordered_json jc;
        jc["scenario_id"] = r.id;
        jc["d_ps_nm_km"] = r.d_fiber_ps_nm_km;
        jc["d_res_ps_nm"] = r.d_res_ps_nm;
        jc["pump_multiple"] = r.pump_multiple;
        jc["baud_gbaud"] = r.baud_gbaud;
        jc["theta_eff"] = r.theta_eff_value;
        jc["sigma2_mean_dbm"] = [&] {
            double m = 0.0;
            for (double s : r.set.sigma2_w) m += s;
            m /= static_cast<double>(r.set.sigma2_w.size());
            return watt_to_dbm(m);
        }();
        jc["c_lag"] = r.set.c_lag;
        jc["theta_ratio"] = r.set.theta_ratio;
        correlations.push_back(jc);
    }
    j["correlations"] = correlations;

    if (!result.errors.empty()) {
        nlohmann::ordered_json errs = nlohmann::ordered_json::array();
        for (const auto& e : result.errors)
            errs.push_back({{"scenario_id", e.id}, {"error", e.message}});
        j["errors"] = errs;
    }
    return j.dump(2) + "\n";
}

void write_summary_json(const std::string& path, const CampaignResult& result,
                        const Provenance& prov, std::size_t asymptote_tail) {
    write_text_file(path, summary_json(result, prov, asymptote_tail));
}

} // namespace dmxci
