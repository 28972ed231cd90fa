#pragma once

namespace dmxci {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kTraceSchema = "xci-trace/1";
inline constexpr const char* kScatterSchema = "xci-scatter/1";
inline constexpr const char* kDispMapSchema = "xci-dispmap/1";
inline constexpr const char* kSummarySchema = "xci-summary/1";

} // namespace dmxci
