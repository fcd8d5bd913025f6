#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace cryomux {

using complex = std::complex<double>;

namespace constants {
inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
// CODATA 2018 exact values.
inline constexpr double planck = 6.62607015e-34;          // J s
inline constexpr double hbar = planck / two_pi;           // J s
inline constexpr double boltzmann = 1.380649e-23;         // J / K
}  // namespace constants

inline double hz_to_rad(double f_hz) { return constants::two_pi * f_hz; }
inline double rad_to_hz(double omega) { return omega / constants::two_pi; }

inline double db_to_amplitude(double db) { return std::pow(10.0, db / 20.0); }
inline double db_to_power_ratio(double db) { return std::pow(10.0, db / 10.0); }
inline double amplitude_to_db(double a) { return 20.0 * std::log10(a); }
inline double power_ratio_to_db(double p) { return 10.0 * std::log10(p); }

inline double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w / 1e-3); }

/// Magnitude of a complex transmission coefficient in dB.
inline double s_to_db(complex s) { return amplitude_to_db(std::abs(s)); }

}  // namespace cryomux
