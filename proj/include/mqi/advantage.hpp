#pragma once

#include <cmath>

#include "mqi/eom.hpp"
#include "mqi/errors.hpp"
#include "mqi/scene.hpp"
#include "mqi/two_mode_state.hpp"

// Error exponents, the quantum-advantage figure F = gamma_qi / gamma_ci, its
// closed forms in state and device parameters, critical memory efficiency, and
// the closed-form optima.

namespace mqi {

// Observable mean and variance under the target-absent (0) and target-present
// (1) hypotheses.
struct HypothesisStats {
  double mean0;
  double mean1;
  double var0;
  double var1;
};

inline void validate(const HypothesisStats& s) {
  if (!(s.var0 >= 0.0) || !(s.var1 >= 0.0))
    throw domain_error("HypothesisStats: variances must be >= 0");
}

// SNR = (mean1 - mean0)^2 / (2 (sqrt(var1) + sqrt(var0))^2).
inline double snr(const HypothesisStats& s) {
  validate(s);
  const double d = s.mean1 - s.mean0;
  const double den = std::sqrt(s.var1) + std::sqrt(s.var0);
  if (den == 0.0) {
    if (d == 0.0) return 0.0;
    throw degenerate_error("snr: zero variance under both hypotheses with distinct means");
  }
  return d * d / (2.0 * den * den);
}

struct AdvantageReport {
  double gamma_qi;
  double gamma_ci;
  double f;  // gamma_qi / gamma_ci; 0 for the kappa = 0 channel
};

inline void require_eta(double eta, const char* fn) {
  if (!(eta > 0.0 && eta <= 1.0))
    throw domain_error(std::string(fn) + ": eta must be in (0, 1]");
}

// Error exponent of the correlation receiver after memory loss eta:
//   eta kappa n_si^2 / (2 (1 + eta n_i + n_b + 2 eta n_i n_b)).
inline double gamma_qi(const TwoModeMoments& m, double eta, const TargetChannel& ch) {
  validate(m);
  validate(ch);
  require_eta(eta, "gamma_qi");
  return eta * ch.kappa * m.n_si * m.n_si /
         (2.0 * (1.0 + eta * m.n_i + ch.n_b + 2.0 * eta * m.n_i * ch.n_b));
}

// Error exponent of the equal-energy coherent-state benchmark:
//   kappa n_s / (4 n_b + 2).
inline double gamma_ci(double n_s, const TargetChannel& ch) {
  validate(ch);
  if (!(n_s >= 0.0)) throw domain_error("gamma_ci: n_s must be >= 0");
  return ch.kappa * n_s / (4.0 * ch.n_b + 2.0);
}

inline AdvantageReport advantage_exact(const TwoModeMoments& m, double eta,
                                       const TargetChannel& ch) {
  if (!(m.n_s > 0.0)) throw degenerate_error("advantage_exact: requires n_s > 0");
  const double qi = gamma_qi(m, eta, ch);
  const double ci = gamma_ci(m.n_s, ch);
  return {qi, ci, ci > 0.0 ? qi / ci : 0.0};
}

// Strong-background approximation of F, valid for kappa << 1 and n_s << n_b:
//   2 eta n_si^2 / (n_s (1 + 2 eta n_i)).
inline double advantage_approx(const TwoModeMoments& m, double eta) {
  validate(m);
  require_eta(eta, "advantage_approx");
  if (!(m.n_s > 0.0)) throw degenerate_error("advantage_approx: requires n_s > 0");
  return 2.0 * eta * m.n_si * m.n_si / (m.n_s * (1.0 + 2.0 * eta * m.n_i));
}

// Same approximation in state parameters:
//   eta nu^2 sinh^2 2r / ((nu cosh 2r - 1)(eta nu cosh 2r - eta + 1)).
// The vacuum corner nu = 1, r = 0 is an indeterminate 0/0 whose limit is the
// maximal local-measurement advantage 2 eta.
inline double advantage_tmst(const TmstParams& p, double eta) {
  validate(p);
  require_eta(eta, "advantage_tmst");
  if (p.r == 0.0 && p.nu == 1.0) return 2.0 * eta;
  const double s = std::sinh(2.0 * p.r);
  const double d = 2.0 * tmst_signal_occupation(p.nu, p.r);  // nu cosh 2r - 1
  return eta * p.nu * p.nu * s * s / (d * (eta * d + 1.0));
}

inline double checked_acosh(double arg, const char* fn) {
  if (arg < 1.0) {
    if (arg < 1.0 - 1e-12)
      throw domain_error(std::string(fn) + ": acosh argument below domain");
    arg = 1.0;  // boundary cases sit exactly at the domain edge
  }
  return std::acosh(arg);
}

inline void require_eta_above_half(double eta, const char* fn) {
  require_eta(eta, fn);
  if (!(eta > 0.5))
    throw domain_error(std::string(fn) + ": eta must exceed 1/2, no finite optimum otherwise");
}

// Squeezing at which the advantage crosses F = 1.
inline double r_qa(double nu, double eta) {
  if (!(nu >= 1.0)) throw domain_error("r_qa: nu must be >= 1");
  require_eta_above_half(eta, "r_qa");
  const double arg = (eta * nu * nu + eta - 1.0) / ((2.0 * eta - 1.0) * nu);
  return 0.5 * checked_acosh(arg, "r_qa");
}

// Squeezing that maximizes the advantage at fixed nu and eta. This is the
// exact stationary point of advantage_tmst in r.
inline double r_optimal(double nu, double eta) {
  if (!(nu >= 1.0)) throw domain_error("r_optimal: nu must be >= 1");
  require_eta_above_half(eta, "r_optimal");
  const double nu2m1 = nu * nu - 1.0;
  const double root = std::sqrt(std::max(nu2m1 * (nu2m1 * eta * eta + 2.0 * eta - 1.0), 0.0));
  const double arg = (eta * nu * nu + eta - 1.0 + root) / ((2.0 * eta - 1.0) * nu);
  return 0.5 * checked_acosh(arg, "r_optimal");
}

// Critical memory efficiency from moments: n_s / (2 (n_si^2 - n_s n_i)).
// Values above 1 mean the advantage is unachievable at any memory efficiency.
inline double eta_critical_moments(const TwoModeMoments& m) {
  validate(m);
  const double den = m.n_si * m.n_si - m.n_s * m.n_i;
  if (!(den > 0.0))
    throw degenerate_error("eta_critical_moments: requires n_si^2 > n_s n_i");
  return m.n_s / (2.0 * den);
}

// Critical memory efficiency in state parameters:
//   1 / (2 - (nu^2 - 1) / (nu cosh 2r - 1)).
inline double eta_critical_tmst(double nu, double r) {
  if (!(nu >= 1.0)) throw domain_error("eta_critical_tmst: nu must be >= 1");
  if (!(r >= 0.0)) throw domain_error("eta_critical_tmst: r must be >= 0");
  const double inner = 2.0 * tmst_signal_occupation(nu, r);
  if (!(inner > 0.0))
    throw degenerate_error("eta_critical_tmst: undefined at the vacuum corner");
  const double den = 2.0 - (nu * nu - 1.0) / inner;
  if (!(den > 0.0))
    throw degenerate_error("eta_critical_tmst: no critical efficiency, benchmark wins at all eta");
  return 1.0 / den;
}

// Critical memory efficiency of the transmitter: (gamma_o + n_m) / (2 gamma_o).
inline double eta_critical_coop(double gamma_o, double n_m_thermal) {
  if (!(gamma_o > 0.0)) throw domain_error("eta_critical_coop: gamma_o must be > 0");
  if (!(n_m_thermal >= 0.0)) throw domain_error("eta_critical_coop: n_m_thermal must be >= 0");
  return (gamma_o + n_m_thermal) / (2.0 * gamma_o);
}

// Closed-form advantage of the transmitter in device parameters; assumes
// gamma_w > gamma_o. Equals advantage_approx of the transmitter moments.
inline double advantage_coop(const Cooperativities& c, double eta, double n_m_thermal) {
  validate(c);
  require_eta(eta, "advantage_coop");
  if (!(n_m_thermal >= 0.0)) throw domain_error("advantage_coop: n_m_thermal must be >= 0");
  if (!(c.gamma_w > c.gamma_o))
    throw regime_error("advantage_coop: closed form assumes gamma_w > gamma_o");
  const double go = c.gamma_o;
  const double gw = c.gamma_w;
  const double num = 2.0 * eta * go * (1.0 + go + gw + 2.0 * n_m_thermal) *
                     (1.0 + go + gw + 2.0 * n_m_thermal);
  const double den = (go + n_m_thermal) *
                     ((1.0 - go + gw) * (1.0 - go + gw) + 8.0 * eta * go * (1.0 + gw) +
                      8.0 * eta * go * n_m_thermal);
  return num / den;
}

// Closed-form near-optimal optical cooperativity at fixed gamma_w:
//   (n_m / (2 eta - 1) + sqrt(n_m gamma_w / (2 eta - 1))) / 2.
// This is an approximation to the argmax of advantage_coop, not an exact
// stationary point; the numeric maximizer sits a few percent higher while the
// advantage itself is flat to a few 1e-5 between the two.
inline double gamma_o_optimal(double gamma_w, double eta, double n_m_thermal) {
  if (!(gamma_w > 0.0)) throw domain_error("gamma_o_optimal: gamma_w must be > 0");
  if (!(n_m_thermal >= 0.0)) throw domain_error("gamma_o_optimal: n_m_thermal must be >= 0");
  require_eta_above_half(eta, "gamma_o_optimal");
  const double t = 2.0 * eta - 1.0;
  return 0.5 * (n_m_thermal / t + std::sqrt(n_m_thermal * gamma_w / t));
}

}  // namespace mqi
