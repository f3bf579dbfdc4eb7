#pragma once

#include <cmath>

#include "mqi/errors.hpp"

// Target-interrogation channel and the lossy optical memory holding the idler.

namespace mqi {

// Beam-splitter target with thermal background. The injected background mode
// carries mean n_b / (1 - kappa) so the returned-mode noise is kappa
// independent and n_b is the observable constant.
struct TargetChannel {
  double kappa;  // target reflectivity, in [0, 1)
  double n_b;    // background mean photon number, >= 0
};

inline void validate(const TargetChannel& ch) {
  if (!(ch.kappa >= 0.0 && ch.kappa < 1.0))
    throw domain_error("TargetChannel: kappa must be in [0, 1)");
  if (!(ch.n_b >= 0.0)) throw domain_error("TargetChannel: n_b must be >= 0");
}

// Delay line storing the idler until the joint measurement. Thermal noise in
// the memory is negligible at optical frequencies; only loss is modeled.
struct MemoryLine {
  double eta;  // transmission efficiency, in (0, 1]
};

inline void validate(const MemoryLine& mem) {
  if (!(mem.eta > 0.0 && mem.eta <= 1.0))
    throw domain_error("MemoryLine: eta must be in (0, 1]");
}

inline MemoryLine memory_from_damping(double gamma_i_per_s, double t_s) {
  if (!(gamma_i_per_s >= 0.0)) throw domain_error("memory_from_damping: gamma_i must be >= 0");
  if (!(t_s >= 0.0)) throw domain_error("memory_from_damping: t must be >= 0");
  const MemoryLine mem{std::exp(-gamma_i_per_s * t_s)};
  validate(mem);  // rejects efficiencies that underflowed to zero
  return mem;
}

inline MemoryLine memory_from_fiber(double alpha_db_per_km, double length_km) {
  if (!(alpha_db_per_km >= 0.0)) throw domain_error("memory_from_fiber: alpha must be >= 0");
  if (!(length_km >= 0.0)) throw domain_error("memory_from_fiber: length must be >= 0");
  const MemoryLine mem{std::pow(10.0, -alpha_db_per_km * length_km / 10.0)};
  validate(mem);
  return mem;
}

// Mean photon number of the returned mode: kappa n_s + n_b.
inline double returned_signal_mean(const TargetChannel& ch, double n_s) {
  validate(ch);
  if (!(n_s >= 0.0)) throw domain_error("returned_signal_mean: n_s must be >= 0");
  return ch.kappa * n_s + ch.n_b;
}

}  // namespace mqi
