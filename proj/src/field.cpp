#include "dmxci/field.hpp"

#include "dmxci/errors.hpp"
#include "dmxci/fft.hpp"
#include "dmxci/units.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>

namespace dmxci {

double SampledField::average_power_w() const {
    if (x.empty()) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += std::norm(x[i]) + std::norm(y[i]);
    return acc / static_cast<double>(x.size());
}

bool SampledField::finite() const {
    for (const auto& v : x)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    for (const auto& v : y)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

void apply_dispersion(std::vector<cd>& samples, double sample_rate_hz,
                      double d_acc_ps_nm, double offset_hz, double f_ref_hz) {
    if (samples.size() < 2 || d_acc_ps_nm == 0.0) {
        if (d_acc_ps_nm == 0.0) return;
        throw ConfigError("apply_dispersion: field must hold at least 2 samples");
    }
    const std::size_t n = samples.size();
    const double lambda = wavelength_m(f_ref_hz);
    const double coef = M_PI * lambda * lambda * (d_acc_ps_nm * 1e-3) / kSpeedOfLight_mps;
    fft::forward(samples);
    for (std::size_t k = 0; k < n; ++k) {
        const double f = fft::bin_freq_hz(k, n, sample_rate_hz) + offset_hz;
        const double phi = coef * f * f;
        samples[k] *= cd(std::cos(phi), std::sin(phi));
    }
    fft::inverse(samples);
}

void apply_dispersion(SampledField& field, double d_acc_ps_nm, double f_ref_hz) {
    apply_dispersion(field.x, field.sample_rate_hz, d_acc_ps_nm, 0.0, f_ref_hz);
    apply_dispersion(field.y, field.sample_rate_hz, d_acc_ps_nm, 0.0, f_ref_hz);
}

void scale_amplitude(SampledField& field, double factor) {
    for (auto& v : field.x) v *= factor;
    for (auto& v : field.y) v *= factor;
}

namespace {
constexpr char kMagic[4] = {'D', 'M', 'X', 'F'};
constexpr std::uint32_t kVersion = 1;
} // namespace

void write_field_snapshot(const std::string& path, const SampledField& field) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw ConfigError("cannot open snapshot file for writing: " + path);
    const std::uint64_t n = field.size();
    std::fwrite(kMagic, 1, 4, f);
    std::fwrite(&kVersion, sizeof(kVersion), 1, f);
    std::fwrite(&n, sizeof(n), 1, f);
    std::fwrite(&field.sample_rate_hz, sizeof(double), 1, f);
    std::fwrite(&field.center_freq_hz, sizeof(double), 1, f);
    std::vector<float> row(4);
    for (std::uint64_t i = 0; i < n; ++i) {
        row[0] = static_cast<float>(field.x[i].real());
        row[1] = static_cast<float>(field.x[i].imag());
        row[2] = static_cast<float>(field.y[i].real());
        row[3] = static_cast<float>(field.y[i].imag());
        std::fwrite(row.data(), sizeof(float), 4, f);
    }
    std::fclose(f);
}

SampledField read_field_snapshot(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw ConfigError("cannot open snapshot file: " + path);
    char magic[4];
    std::uint32_t version = 0;
    std::uint64_t n = 0;
    SampledField field;
    bool ok = std::fread(magic, 1, 4, f) == 4 && std::memcmp(magic, kMagic, 4) == 0;
    ok = ok && std::fread(&version, sizeof(version), 1, f) == 1 && version == kVersion;
    ok = ok && std::fread(&n, sizeof(n), 1, f) == 1;
    ok = ok && std::fread(&field.sample_rate_hz, sizeof(double), 1, f) == 1;
    ok = ok && std::fread(&field.center_freq_hz, sizeof(double), 1, f) == 1;
    if (!ok) {
        std::fclose(f);
        throw ConfigError("malformed snapshot file: " + path);
    }
    field.x.resize(n);
    field.y.resize(n);
    std::vector<float> row(4);
    for (std::uint64_t i = 0; i < n; ++i) {
        if (std::fread(row.data(), sizeof(float), 4, f) != 4) {
            std::fclose(f);
            throw ConfigError("truncated snapshot file: " + path);
        }
        field.x[i] = cd(row[0], row[1]);
        field.y[i] = cd(row[2], row[3]);
    }
    std::fclose(f);
    return field;
}

} // namespace dmxci
