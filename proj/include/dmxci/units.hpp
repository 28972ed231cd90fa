#pragma once

#include <cmath>

// Unit conventions used throughout:
//   frequencies Hz, powers W, lengths km (fiber) or m (wavelengths),
//   dispersion ps/nm (accumulated) or ps/(nm km) (coefficient),
//   loss dB/km, gain dB, gamma 1/(W km).
// Conversions happen at use sites through the helpers below.

namespace dmxci {

inline constexpr double kSpeedOfLight_mps = 299792458.0;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

inline double dbm_to_watt(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }
inline double watt_to_dbm(double watt) { return 10.0 * std::log10(watt / 1e-3); }

// dB/km field attenuation -> 1/km power attenuation exponent.
inline double loss_db_to_alpha_per_km(double loss_db_per_km) {
    return loss_db_per_km * std::log(10.0) / 10.0;
}

inline double wavelength_m(double freq_hz) { return kSpeedOfLight_mps / freq_hz; }

// Accumulated dispersion [ps/nm] -> group-delay dispersion [s^2], both already
// integrated over length. beta = -D lambda^2 / (2 pi c), 1 ps/nm = 1e-3 s/m.
inline double acc_dispersion_to_beta_s2(double d_acc_ps_nm, double f_ref_hz) {
    const double lambda = wavelength_m(f_ref_hz);
    return -d_acc_ps_nm * 1e-3 * lambda * lambda /
           (2.0 * M_PI * kSpeedOfLight_mps);
}

} // namespace dmxci
