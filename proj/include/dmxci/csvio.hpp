#pragma once

#include "dmxci/analysis.hpp"
#include "dmxci/campaign.hpp"
#include "dmxci/topology.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dmxci {

struct Provenance {
    std::string config_hash;
    std::uint64_t seed = 0;
};

// Frozen trace schema: two provenance comment lines, then
// scenario_id,mode,span_index,snr_xci_db,p_xci_dbm,delta_p_xci_db,floor_snr_db
// with one row per (scenario, mode, span). Powers below the representable
// range and absent floors render as "nan".
std::string trace_csv(const std::vector<XciTrace>& traces, const Provenance& prov);
void write_trace_csv(const std::string& path, const std::vector<XciTrace>& traces,
                     const Provenance& prov);

struct TraceFile {
    std::vector<XciTrace> traces;
    Provenance prov;
};
TraceFile read_trace_csv(const std::string& path);

std::string scatter_csv(const std::vector<CorrelationRecord>& records, const Provenance& prov);
void write_scatter_csv(const std::string& path, const std::vector<CorrelationRecord>& records,
                       const Provenance& prov);

std::string dispersion_map_csv(const LinkSegment& segment, const Provenance& prov);
void write_dispersion_map_csv(const std::string& path, const LinkSegment& segment,
                              const Provenance& prov);

// Per-trace asymptote/settling/floor digest plus the correlation sets.
std::string summary_json(const CampaignResult& result, const Provenance& prov,
                         std::size_t asymptote_tail = 5);
void write_summary_json(const std::string& path, const CampaignResult& result,
                        const Provenance& prov, std::size_t asymptote_tail = 5);

void write_text_file(const std::string& path, const std::string& content);

} // namespace dmxci
