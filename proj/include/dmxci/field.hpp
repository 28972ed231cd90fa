#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace dmxci {

using cd = std::complex<double>;

// Dual-polarization complex baseband field on a uniform time grid.
// Frequencies inside the samples are offsets from center_freq_hz; a positive
// offset f corresponds to a time factor exp(+i 2 pi f t).
struct SampledField {
    std::vector<cd> x;
    std::vector<cd> y;
    double sample_rate_hz = 0.0;
    double center_freq_hz = 0.0;

    std::size_t size() const { return x.size(); }
    // Mean of |x|^2 + |y|^2, i.e. total optical power in W.
    double average_power_w() const;
    bool finite() const;
};

// Chromatic-dispersion all-pass H(f) = exp(+i pi lambda_ref^2 D (f+offset)^2 / c)
// applied in the frequency domain; positive d_acc_ps_nm with the repo-wide sign
// convention, so applying d then -d is the identity. offset_hz shifts the
// evaluation point, used when the dispersion was physically accumulated about a
// carrier other than the signal's own baseband center.
void apply_dispersion(std::vector<cd>& samples, double sample_rate_hz,
                      double d_acc_ps_nm, double offset_hz, double f_ref_hz);

// Both polarizations about the field center (offset 0).
void apply_dispersion(SampledField& field, double d_acc_ps_nm, double f_ref_hz);

// Scale both polarizations by a real amplitude factor.
void scale_amplitude(SampledField& field, double factor);

// Little-endian snapshot dump: magic "DMXF", u32 version, u64 length,
// f64 sample_rate_hz, f64 center_freq_hz, then length interleaved complex64
// (float32 re/im) pairs X then Y per sample.
void write_field_snapshot(const std::string& path, const SampledField& field);
SampledField read_field_snapshot(const std::string& path);

} // namespace dmxci
