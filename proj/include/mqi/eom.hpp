#pragma once

#include <cmath>

#include "mqi/constants.hpp"
#include "mqi/errors.hpp"
#include "mqi/two_mode_state.hpp"

// Electro-optomechanical transducer: thermal occupations of its modes and the
// scattering coefficients and output moments of the steady-state mode map.

namespace mqi {

// Operating environment shared by transmitter and converter. Frequencies are
// ordinary frequencies in Hz (omega / 2 pi).
struct EomEnvironment {
  double temperature;     // K
  double freq_mech;       // mechanical resonator, Hz
  double freq_microwave;  // microwave cavity, Hz
  double freq_optical;    // optical cavity, Hz
};

inline void validate(const EomEnvironment& e) {
  if (!(e.temperature > 0.0)) throw domain_error("EomEnvironment: temperature must be > 0");
  if (!(e.freq_mech > 0.0) || !(e.freq_microwave > 0.0) || !(e.freq_optical > 0.0))
    throw domain_error("EomEnvironment: frequencies must be > 0");
}

inline double optical_freq_from_pump_wavelength(double wavelength_m) {
  if (!(wavelength_m > 0.0))
    throw domain_error("optical_freq_from_pump_wavelength: wavelength must be > 0");
  return speed_of_light / wavelength_m;
}

// Bose-Einstein occupation 1 / (exp(h f / kB T) - 1); h f equals hbar omega.
inline double thermal_occupation(double freq_hz, double temperature_k) {
  if (!(freq_hz > 0.0)) throw domain_error("thermal_occupation: frequency must be > 0");
  if (!(temperature_k > 0.0)) throw domain_error("thermal_occupation: temperature must be > 0");
  return 1.0 / std::expm1(planck_h * freq_hz / (boltzmann_kb * temperature_k));
}

// Dimensionless optomechanical cooperativities. The mode map is stable only
// while gamma_o < 1 + gamma_w. gamma = 0 is admitted as the decoupled limit.
struct Cooperativities {
  double gamma_o;  // optical
  double gamma_w;  // microwave
};

inline void validate(const Cooperativities& c) {
  if (!(c.gamma_o >= 0.0) || !(c.gamma_w >= 0.0))
    throw domain_error("Cooperativities: cooperativities must be >= 0");
  if (!(c.gamma_o < 1.0 + c.gamma_w))
    throw stability_error("Cooperativities: unstable, requires gamma_o < 1 + gamma_w");
}

// Scattering amplitudes of the transducer mode map. The two-mode-squeezing
// amplitudes are purely imaginary, so only their squared magnitudes c_o_sq,
// c_w_sq are stored; their product is real and negative,
// C_w C_o = -sqrt(c_w_sq c_o_sq). Commutator preservation demands
//   a_o^2 - b^2 - c_o_sq = 1   and   a_w^2 - b^2 + c_w_sq = 1.
struct EomCoefficients {
  double a_w;
  double a_o;
  double b;
  double c_o_sq;
  double c_w_sq;
};

inline EomCoefficients eom_coefficients(const Cooperativities& c) {
  validate(c);
  const double d = 1.0 + c.gamma_w - c.gamma_o;
  const double sum = c.gamma_w + c.gamma_o;
  return {(1.0 - sum) / d, (1.0 + sum) / d, 2.0 * std::sqrt(c.gamma_w * c.gamma_o) / d,
          4.0 * c.gamma_o / (d * d), 4.0 * c.gamma_w / (d * d)};
}

// Output moments of the transmitter driven by a mechanical mode with
// occupation n_m_thermal. Cavity occupations are far below one at the
// operating temperatures and are neglected. The cross correlation is negative:
// the beam-splitter and two-mode-squeezing paths interfere destructively.
inline TwoModeMoments transmitter_moments(const EomCoefficients& k, double n_m_thermal) {
  if (!(n_m_thermal >= 0.0))
    throw domain_error("transmitter_moments: n_m_thermal must be >= 0");
  const double b_sq = k.b * k.b;
  const double cw_co = -std::sqrt(k.c_w_sq * k.c_o_sq);
  return {b_sq + k.c_w_sq * n_m_thermal, b_sq + k.c_o_sq * (n_m_thermal + 1.0),
          k.a_w * k.b + cw_co * (n_m_thermal + 1.0)};
}

}  // namespace mqi
