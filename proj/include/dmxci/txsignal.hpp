#pragma once

#include "dmxci/field.hpp"

#include <cstdint>
#include <vector>

namespace dmxci {

struct PrbsSeeds {
    std::uint32_t cut_x = 1;
    std::uint32_t cut_y = 2;
    std::uint32_t pump_x = 3;
    std::uint32_t pump_y = 4;
};

// Pump-and-probe channel plan. The pump sits pump_offset_ghz away from the CUT
// (a signed multiple of the grid spacing); the synthesized field is centered on
// the midpoint of the two carriers. A pump power of -inf dBm disables the pump.
struct ChannelPlan {
    double cut_freq_thz = 193.9;
    double pump_offset_ghz = 75.0;
    double grid_spacing_ghz = 37.5;
    double baud_rate_gbaud = 32.0;
    double cut_power_dbm = -20.0;
    double pump_power_dbm = 1.0;
    double predistortion_ps_nm = 102400.0;
    double rolloff = 0.1;
    int prbs_degree = 17;
    PrbsSeeds seeds;

    bool has_pump() const;
    double cut_freq_hz() const { return cut_freq_thz * 1e12; }
    double pump_freq_hz() const { return cut_freq_hz() + pump_offset_ghz * 1e9; }
    double field_center_hz() const { return cut_freq_hz() + pump_offset_ghz * 1e9 / 2.0; }
    double baud_hz() const { return baud_rate_gbaud * 1e9; }
    void validate() const;
};

// Transmitted unit-energy constellation symbols kept for the data-aided DSP.
struct SymbolReference {
    std::vector<cd> cut_x, cut_y;
    std::vector<cd> pump_x, pump_y;
};

// Gray-mapped 16-QAM, levels {+-1,+-3}/sqrt(10) per rail, bit order
// (b0 b1 b2 b3) -> (I: 00 -3, 01 -1, 11 +1, 10 +3; Q likewise from b2 b3).
std::vector<cd> map_qam16(const std::vector<std::uint8_t>& bits);

// Root-raised-cosine amplitude response at baseband offset f.
double rrc_amplitude(double f_hz, double baud_hz, double rolloff);

// Smallest power-of-two multiple of the baud rate admitting the two-channel
// band: fs >= 2 (|pump_offset| + (1+rolloff) R_s).
double default_sample_rate_hz(const ChannelPlan& plan);

// RRC-shaped single channel at offset_hz from the field center, predistorted
// about its own carrier, calibrated so mean(|x|^2+|y|^2) is power_dbm exactly.
// Uses cyclic (FFT) shaping; symbol k sits at sample k*sps.
SampledField shape_channel(const std::vector<cd>& symbols_x, const std::vector<cd>& symbols_y,
                           double baud_hz, double rolloff, double offset_hz, double power_dbm,
                           double sample_rate_hz, double predistortion_ps_nm, double f_ref_hz);

// Full two-channel WDM field plus the reference symbols of both channels.
struct WdmSignal {
    SampledField field;
    SymbolReference reference;
};
WdmSignal build_wdm(const ChannelPlan& plan, std::size_t n_symbols, double sample_rate_hz);

} // namespace dmxci
