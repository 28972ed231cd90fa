#pragma once

#include "dmxci/field.hpp"
#include "dmxci/txsignal.hpp"

#include <cstddef>
#include <vector>

namespace dmxci {

// Data-aided measurement receiver. The LMS and CPE both use the known
// transmitted symbols; discard_symbols are processed for convergence but
// excluded from the EVM, and the cyclic sequence is re-used until at least
// min_measure_symbols contribute.
struct RxConfig {
    int lms_taps = 42;
    double lms_mu = 1e-4;
    int samples_per_symbol = 2;
    int cpe_block = 64;
    int discard_symbols = 4096;
    int min_measure_symbols = 8192;
    double snr_cap_db = 60.0;

    void validate() const;
};

struct RxResult {
    double evm = 0.0;
    double snr_db = 0.0;
    double cdc_total_ps_nm = 0.0;
    std::size_t symbols_processed = 0;
};

// CUT brought to baseband at the equalizer rate.
struct IsolatedSignal {
    std::vector<cd> x, y;
    double sample_rate_hz = 0.0;
    double baud_hz = 0.0;
    int sps = 2;
};

// Deterministic dispersion seen by the CUT: the part accumulated about its own
// carrier (transmitter predistortion) plus the part accumulated about the
// field center, whose group-delay difference at the CUT offset matters.
struct CdcBudget {
    double carrier_ps_nm = 0.0;
    double center_ps_nm = 0.0;
    double carrier_offset_hz = 0.0;

    double total_ps_nm() const { return carrier_ps_nm + center_ps_nm; }
};

// Frequency shift to baseband, brick-wall low-pass of width (1+rolloff) R_s,
// matched RRC filter, exact resampling to sps samples/symbol.
IsolatedSignal isolate_cut(const SampledField& field, double cut_freq_hz, double baud_hz,
                           double rolloff, int sps);

// Removes the full deterministic dispersion budget (all-pass inverse).
void cdc(IsolatedSignal& signal, const CdcBudget& budget, double f_ref_hz);
// Single-number form: dispersion accumulated about the CUT carrier only.
void cdc(IsolatedSignal& signal, double acc_dispersion_ps_nm, double f_ref_hz);

// One-tap data-aided MIMO alignment: the 2x2 least-squares channel between
// the reference symbols and the symbol-instant samples is inverted out,
// removing the deterministic TX calibration scale (and any polarization
// swap) before the adaptive stage.
void data_aided_align(IsolatedSignal& signal, const std::vector<cd>& ref_x,
                      const std::vector<cd>& ref_y);

struct EqualizedSymbols {
    std::vector<cd> x, y;              // one sample per symbol
    std::vector<std::size_t> ref_idx;  // reference symbol index per output
};

// 2x2 butterfly T/2-spaced FIR with data-aided LMS updates, initialized to
// the center-tap identity. Aborts if the error energy grows tenfold over a
// window (divergence).
EqualizedSymbols lms_equalize(const IsolatedSignal& signal, const std::vector<cd>& ref_x,
                              const std::vector<cd>& ref_y, const RxConfig& cfg);

// Per-block data-aided phase rotation removal, jointly over polarizations.
void cpe(EqualizedSymbols& symbols, const std::vector<cd>& ref_x,
         const std::vector<cd>& ref_y, int block);

// EVM = sqrt(mean|r-s|^2 / mean|s|^2); SNR = -20 log10 EVM, capped.
RxResult evm_snr(const EqualizedSymbols& symbols, const std::vector<cd>& ref_x,
                 const std::vector<cd>& ref_y, double snr_cap_db);

struct XciMeasurement {
    double snr_xci_db = 0.0;
    double p_xci_w = 0.0;
    RxResult rx;
};

// Full chain at one tap; P_XCI = P_cut / SNR with the configured CUT power.
XciMeasurement measure_xci(const SampledField& field, const ChannelPlan& plan,
                           const SymbolReference& reference, double line_acc_dispersion_ps_nm,
                           const RxConfig& cfg);

} // namespace dmxci
