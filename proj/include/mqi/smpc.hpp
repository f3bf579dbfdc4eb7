#pragma once

#include <cmath>
#include <optional>
#include <utility>

#include "mqi/advantage.hpp"
#include "mqi/eom.hpp"
#include "mqi/errors.hpp"
#include "mqi/scene.hpp"
#include "mqi/two_mode_state.hpp"

// Single-mode phase-conjugate receiver: the returned signal is frequency
// converted, interfered with the stored idler on a low-reflectivity beam
// splitter, and the single output mode is read by a photon-number-resolving
// detector with finite resolution.

namespace mqi {

// Moments of the two beam-splitter input modes after conversion and storage.
struct ConverterOutputMoments {
  double n_cs;   // converted returned signal, >= 0
  double n_ci;   // stored idler, >= 0
  double n_csi;  // signed cross term <c_S^dag c_I + c_I^dag c_S> / 2
};

inline void validate(const ConverterOutputMoments& m) {
  if (!(m.n_cs >= 0.0) || !(m.n_ci >= 0.0))
    throw domain_error("ConverterOutputMoments: mode occupations must be >= 0");
}

// Detector resolution: the counter saturates at K; an unbounded detector is a
// distinct variant (empty optional), not a large-K limit.
using PnrResolution = std::optional<long>;
inline constexpr std::nullopt_t unbounded_resolution = std::nullopt;

struct SmpcReceiver {
  double reflectivity;       // beam-splitter reflectivity R, in [0, 1]
  PnrResolution resolution;  // photon-count cap K >= 1, or unbounded
};

inline void validate(const SmpcReceiver& rx) {
  if (!(rx.reflectivity >= 0.0 && rx.reflectivity <= 1.0))
    throw domain_error("SmpcReceiver: reflectivity must be in [0, 1]");
  if (rx.resolution && !(*rx.resolution >= 1))
    throw domain_error("SmpcReceiver: resolution must be >= 1 when bounded");
}

// Observable statistics under both hypotheses plus the detector-mode means
// they derive from.
struct PnrObservableStats {
  HypothesisStats stats;
  double n_c0;  // detector-mode mean, target absent
  double n_c1;  // detector-mode mean, target present
};

// Beam-splitter input moments. The converted-signal occupation is dominated by
// the amplified background plus conversion noise; the kappa n_s contribution
// is negligible against n_b and is treated as hypothesis independent.
inline ConverterOutputMoments converter_output_moments(const EomCoefficients& conv,
                                                       double n_m_thermal,
                                                       const TargetChannel& ch,
                                                       const MemoryLine& mem,
                                                       const TwoModeMoments& input) {
  if (!(n_m_thermal >= 0.0))
    throw domain_error("converter_output_moments: n_m_thermal must be >= 0");
  validate(ch);
  validate(mem);
  validate(input);
  const double b_sq = conv.b * conv.b;
  return {b_sq * (ch.n_b + 1.0) + conv.c_o_sq * (n_m_thermal + 1.0), mem.eta * input.n_i,
          conv.b * std::sqrt(mem.eta * ch.kappa) * input.n_si};
}

// Convenience for a two-mode squeezed vacuum input of signal energy n_s, for
// which n_si = sqrt(n_s (n_s + 1)).
inline ConverterOutputMoments converter_output_moments_tmsv(const EomCoefficients& conv,
                                                            double n_m_thermal,
                                                            const TargetChannel& ch,
                                                            const MemoryLine& mem, double n_s) {
  if (!(n_s >= 0.0)) throw domain_error("converter_output_moments_tmsv: n_s must be >= 0");
  return converter_output_moments(conv, n_m_thermal, ch, mem,
                                  {n_s, n_s, std::sqrt(n_s * (n_s + 1.0))});
}

// The receiver's working reflectivity R = sqrt(n_ci) / n_cs. Meaningful only
// in the low-reflectivity regime sqrt(n_ci) << n_cs.
inline double optimal_reflectivity(const ConverterOutputMoments& m) {
  validate(m);
  if (m.n_ci == 0.0) return 0.0;
  if (!(m.n_cs > 0.0)) throw degenerate_error("optimal_reflectivity: requires n_cs > 0");
  const double root = std::sqrt(m.n_ci);
  if (root > m.n_cs)
    throw regime_error("optimal_reflectivity: sqrt(n_ci) > n_cs, low-reflectivity regime violated");
  return root / m.n_cs;
}

// Mean photon number of the detected output mode under each hypothesis:
//   N(kappa=0) = R n_cs + (1 - R) n_ci
//   N(kappa>0) = N(kappa=0) + 2 sqrt(R (1 - R)) n_csi.
inline std::pair<double, double> output_mode_means(double reflectivity,
                                                   const ConverterOutputMoments& m) {
  validate(m);
  if (!(reflectivity >= 0.0 && reflectivity <= 1.0))
    throw domain_error("output_mode_means: reflectivity must be in [0, 1]");
  const double n0 = reflectivity * m.n_cs + (1.0 - reflectivity) * m.n_ci;
  const double n1 = n0 + 2.0 * std::sqrt(reflectivity * (1.0 - reflectivity)) * m.n_csi;
  if (n1 < 0.0)
    throw domain_error("output_mode_means: negative output mean, inconsistent signed moments");
  return {n0, n1};
}

// Mean and variance of min(n, K) for geometric photon statistics
// P(n) = (1 - q) q^n with mean n_c, q = n_c / (n_c + 1). The unbounded
// detector keeps the thermal moments (n_c, n_c (n_c + 1)).
inline std::pair<double, double> pnr_moments(double n_c, const PnrResolution& k) {
  if (!(n_c >= 0.0)) throw domain_error("pnr_moments: n_c must be >= 0");
  if (k && !(*k >= 1)) throw domain_error("pnr_moments: resolution must be >= 1 when bounded");
  if (n_c == 0.0) return {0.0, 0.0};
  if (!k) return {n_c, n_c * (n_c + 1.0)};
  const double q = n_c / (n_c + 1.0);
  const double kk = double(*k);
  const double q_k = std::pow(q, kk);
  // q / (1 - q) equals n_c exactly
  const double mean = n_c * (1.0 - q_k);
  const double var = n_c * (1.0 - (2.0 * kk + 1.0) * q_k + 2.0 * n_c * (1.0 - q_k)) - mean * mean;
  return {mean, var};
}

// Hypothesis statistics of the receiver observable.
inline PnrObservableStats smpc_stats(const SmpcReceiver& rx, const ConverterOutputMoments& m) {
  validate(rx);
  const auto [n0, n1] = output_mode_means(rx.reflectivity, m);
  const auto [m0, v0] = pnr_moments(n0, rx.resolution);
  const auto [m1, v1] = pnr_moments(n1, rx.resolution);
  return {{m0, m1, v0, v1}, n0, n1};
}

inline double f_smpc_from_moments(const SmpcReceiver& rx, const ConverterOutputMoments& m,
                                  const TargetChannel& ch, double benchmark_n_s) {
  if (!(benchmark_n_s > 0.0))
    throw degenerate_error("f_smpc: benchmark signal energy must be > 0");
  if (ch.kappa == 0.0) return 0.0;  // no target channel: both exponents vanish
  return snr(smpc_stats(rx, m).stats) / gamma_ci(benchmark_n_s, ch);
}

// Receiver advantage SNR / gamma_ci against the coherent-state benchmark at
// equal signal energy; the benchmark defaults to the input state's n_s.
inline double f_smpc(const SmpcReceiver& rx, const EomCoefficients& conv, double n_m_thermal,
                     const TargetChannel& ch, const MemoryLine& mem, const TwoModeMoments& input,
                     std::optional<double> benchmark_n_s = std::nullopt) {
  const auto m = converter_output_moments(conv, n_m_thermal, ch, mem, input);
  return f_smpc_from_moments(rx, m, ch, benchmark_n_s.value_or(input.n_s));
}

}  // namespace mqi
