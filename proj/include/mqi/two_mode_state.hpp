#pragma once

#include <algorithm>
#include <cmath>

#include "mqi/errors.hpp"

// Joint signal-idler Gaussian state in the mean-photon-number
// parameterization, plus the partial-transpose entanglement test.

namespace mqi {

// Two-mode squeezed thermal state: both modes share the symplectic eigenvalue
// nu (vacuum limited at nu = 1, nu = 2 n_th + 1 for thermal inputs) and are
// coupled by the squeezing parameter r.
struct TmstParams {
  double nu;  // symplectic eigenvalue, >= 1
  double r;   // squeezing parameter, >= 0
};

inline void validate(const TmstParams& p) {
  if (!(p.nu >= 1.0)) throw domain_error("TmstParams: nu must be >= 1");
  if (!(p.r >= 0.0)) throw domain_error("TmstParams: r must be >= 0");
}

// Mean photon numbers of signal and idler plus the signed cross correlation
// <a_S a_I + a_I a_S>/2. Physical states obey
//   n_si^2 <= n_s n_i + min(n_s, n_i),
// saturated by the two-mode squeezed vacuum.
struct TwoModeMoments {
  double n_s;   // signal occupation, >= 0
  double n_i;   // idler occupation, >= 0
  double n_si;  // signed cross correlation
};

inline void validate(const TwoModeMoments& m) {
  if (!(m.n_s >= 0.0) || !(m.n_i >= 0.0))
    throw domain_error("TwoModeMoments: mode occupations must be >= 0");
  const double bound = m.n_s * m.n_i + std::min(m.n_s, m.n_i);
  if (!(m.n_si * m.n_si <= bound * (1.0 + 1e-12) + 1e-12))
    throw domain_error("TwoModeMoments: cross correlation exceeds the physical bound");
}

// Signal occupation (nu cosh 2r - 1) / 2 evaluated as nu sinh^2 r + (nu-1)/2,
// which stays accurate toward the vacuum corner where the direct form cancels.
inline double tmst_signal_occupation(double nu, double r) {
  const double sh = std::sinh(r);
  return nu * sh * sh + 0.5 * (nu - 1.0);
}

inline TwoModeMoments tmst_moments(const TmstParams& p) {
  validate(p);
  const double n = tmst_signal_occupation(p.nu, p.r);
  return {n, n, p.nu * std::sinh(2.0 * p.r) / 2.0};
}

// Smallest symplectic eigenvalue of the partially transposed standard-form
// covariance matrix (vacuum variance 1, diagonals a = 2 n_s + 1, b = 2 n_i + 1,
// off-diagonal blocks diag(2 n_si, -2 n_si)). The state is entangled iff the
// result is < 1. The discriminant factors as ((a-b)^2 + 4 c^2)(a+b)^2, and the
// eigenvalue is evaluated through 2 det / (delta + sqrt(disc)) to avoid the
// cancellation in delta - sqrt(disc) at large squeezing.
inline double pt_min_symplectic(const TwoModeMoments& m) {
  validate(m);
  const double a = 2.0 * m.n_s + 1.0;
  const double b = 2.0 * m.n_i + 1.0;
  const double c = 2.0 * m.n_si;
  const double delta = a * a + b * b + 2.0 * c * c;
  const double det_root = a * b - c * c;  // sqrt(det sigma), signed
  const double disc = ((a - b) * (a - b) + 4.0 * c * c) * (a + b) * (a + b);
  if (disc < -1e-12 * delta * delta)
    throw domain_error("pt_min_symplectic: negative discriminant, moments not physical");
  const double nu_sq = 2.0 * det_root * det_root / (delta + std::sqrt(std::max(disc, 0.0)));
  return std::sqrt(nu_sq);
}

inline bool is_entangled(const TwoModeMoments& m) { return pt_min_symplectic(m) < 1.0; }

}  // namespace mqi
