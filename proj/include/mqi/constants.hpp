#pragma once

// CODATA exact defining constants; echoed in dataset metadata so thermal
// occupations are reproducible bit for bit.

namespace mqi {

inline constexpr double planck_h = 6.62607015e-34;     // J s
inline constexpr double boltzmann_kb = 1.380649e-23;   // J / K
inline constexpr double speed_of_light = 299792458.0;  // m / s

inline constexpr const char* library_version = "0.1.0";

}  // namespace mqi
