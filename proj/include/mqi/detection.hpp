#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "mqi/errors.hpp"
#include "mqi/philox.hpp"
#include "mqi/smpc.hpp"

// Monte-Carlo simulation of the M-shot threshold test. Each trial averages M
// photon-count readings and compares against a threshold; the error
// probability of the best threshold decays like exp(-snr * M).

namespace mqi {

struct DetectionExperiment {
  long shots_m = 1;          // readings averaged into one decision
  long trials = 1;           // Monte-Carlo trials per hypothesis
  std::uint64_t seed = 1;
  double q0 = 0.0;           // per-shot geometric parameter, target absent
  double q1 = 0.0;           // per-shot geometric parameter, target present
  PnrResolution resolution = 1;
};

inline void validate(const DetectionExperiment& e) {
  if (!(e.shots_m >= 1)) throw domain_error("DetectionExperiment: shots_m must be >= 1");
  if (!(e.trials >= 1)) throw domain_error("DetectionExperiment: trials must be >= 1");
  if (!(e.q0 >= 0.0 && e.q0 < 1.0))
    throw domain_error("DetectionExperiment: q0 must be in [0, 1)");
  if (!(e.q1 >= 0.0 && e.q1 < 1.0))
    throw domain_error("DetectionExperiment: q1 must be in [0, 1)");
  if (e.resolution && !(*e.resolution >= 1))
    throw domain_error("DetectionExperiment: resolution must be >= 1 when bounded");
}

// Builds an experiment from detector-mode means: a mean occupation n maps to
// the geometric parameter q = n / (n + 1).
inline DetectionExperiment experiment_from_stats(const PnrObservableStats& s,
                                                 PnrResolution resolution, long shots_m,
                                                 long trials, std::uint64_t seed) {
  if (!(s.n_c0 >= 0.0 && s.n_c1 >= 0.0))
    throw domain_error("experiment_from_stats: mode means must be >= 0");
  DetectionExperiment e{shots_m, trials, seed, s.n_c0 / (s.n_c0 + 1.0),
                        s.n_c1 / (s.n_c1 + 1.0), resolution};
  validate(e);
  return e;
}

struct ErrorEstimate {
  double p_err;          // equal-prior mean error, in [0, 1]
  double ci_halfwidth;   // binomial 95% half-width on p_err
  double threshold_used; // per-shot threshold of the best grid point
  double error_sum;      // unnormalized two-sided error sum (= 2 p_err)
};

// One reading from P(n) = (1-q) q^n capped at the detector resolution.
// Inverse CDF: n = floor(log(1-u) / log(q)).
template <class Rng>
long sample_observable(double q, PnrResolution k, Rng& rng) {
  const double u = rng.next_double();
  if (q <= 0.0) return 0;
  const long n = static_cast<long>(std::floor(std::log1p(-u) / std::log(q)));
  return (k && n > *k) ? *k : n;
}

// Sum of shots_m readings. Zero readings dominate when q is small, so the run
// of zeros before each nonzero reading is drawn in one shot (geometric gap);
// the nonzero reading value is then drawn conditionally. Equal in distribution
// to shots_m independent sample_observable draws, at O(q m) expected cost.
template <class Rng>
long long sample_trial_sum(double q, PnrResolution k, long shots_m, Rng& rng) {
  if (q <= 0.0) return 0;
  const double log_zero = std::log1p(-q);  // log P(reading = 0)
  const double log_q = std::log(q);
  long long sum = 0;
  long pos = 0;
  for (;;) {
    const double u = rng.next_double();
    const long gap = static_cast<long>(std::floor(std::log1p(-u) / log_zero));
    pos += gap + 1;
    if (pos > shots_m) break;
    if (k && *k == 1) {
      sum += 1;  // on-off detector: any nonzero reading clips to 1
    } else {
      const double v = rng.next_double();
      long long n = 1 + static_cast<long long>(std::floor(std::log1p(-v) / log_q));
      if (k && n > *k) n = *k;
      sum += n;
    }
  }
  return sum;
}

namespace detail {

// Substream id: hypothesis bit in the top bit, trial index below. Every trial
// owns a counter substream, so any execution order gives identical sums.
inline std::uint64_t trial_stream(int hypothesis, long trial) {
  return (static_cast<std::uint64_t>(hypothesis) << 63) | static_cast<std::uint64_t>(trial);
}

inline std::vector<long long> simulate_sums(const DetectionExperiment& e, int hypothesis,
                                            int threads) {
  const double q = hypothesis ? e.q1 : e.q0;
  std::vector<long long> sums(static_cast<std::size_t>(e.trials));
  auto worker = [&](long lo, long hi) {
    for (long t = lo; t < hi; ++t) {
      Philox4x32 rng(e.seed, trial_stream(hypothesis, t));
      sums[static_cast<std::size_t>(t)] = sample_trial_sum(q, e.resolution, e.shots_m, rng);
    }
  };
  if (threads <= 1 || e.trials < 2 * threads) {
    worker(0, e.trials);
  } else {
    std::vector<std::thread> pool;
    const long chunk = (e.trials + threads - 1) / threads;
    for (int j = 0; j < threads; ++j) {
      const long lo = j * chunk;
      const long hi = std::min<long>(lo + chunk, e.trials);
      if (lo >= hi) break;
      pool.emplace_back(worker, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  return sums;
}

}  // namespace detail

// Minimum-error threshold test: scans 101 thresholds evenly spaced between
// the analytic per-shot hypothesis means (inclusive), counts misclassified
// trials on each side, and reports the equal-prior mean error of the best
// grid point (first minimum on ties).
inline ErrorEstimate estimate_error_probability(const DetectionExperiment& e, int threads = 1) {
  validate(e);
  const double m0 = pnr_moments(e.q0 / (1.0 - e.q0), e.resolution).first;
  const double m1 = pnr_moments(e.q1 / (1.0 - e.q1), e.resolution).first;
  if (m0 == m1) return {0.5, 0.0, m0, 1.0};

  auto sums0 = detail::simulate_sums(e, 0, threads);
  auto sums1 = detail::simulate_sums(e, 1, threads);
  std::sort(sums0.begin(), sums0.end());
  std::sort(sums1.begin(), sums1.end());

  // flip so "above threshold" always means "decide target present"
  const bool flipped = m1 < m0;
  const double lo = flipped ? m1 : m0;
  const double hi = flipped ? m0 : m1;
  const auto& above = flipped ? sums1 : sums0;  // errors when above cutoff
  const auto& below = flipped ? sums0 : sums1;  // errors when at or below

  long best_err0 = 0, best_err1 = 0;
  double best_thr = 0.0;
  long best_total = -1;
  for (int i = 0; i <= 100; ++i) {
    const double thr = lo + (hi - lo) * (static_cast<double>(i) / 100.0);
    const double cutoff = thr * static_cast<double>(e.shots_m);
    const long err0 = static_cast<long>(
        above.end() - std::upper_bound(above.begin(), above.end(), cutoff));
    const long err1 = static_cast<long>(
        std::upper_bound(below.begin(), below.end(), cutoff) - below.begin());
    if (best_total < 0 || err0 + err1 < best_total) {
      best_total = err0 + err1;
      best_err0 = err0;
      best_err1 = err1;
      best_thr = thr;
    }
  }

  const double t = static_cast<double>(e.trials);
  const double p0 = static_cast<double>(best_err0) / t;
  const double p1 = static_cast<double>(best_err1) / t;
  const double ci = 1.96 * 0.5 * std::sqrt((p0 * (1.0 - p0) + p1 * (1.0 - p1)) / t);
  return {0.5 * (p0 + p1), ci, best_thr, p0 + p1};
}

// Exponential decay predicted by the Chernoff bound (exponent only; the
// prefactor is not modeled).
inline double chernoff_prediction(double snr, double m) {
  if (!(snr >= 0.0)) throw domain_error("chernoff_prediction: snr must be >= 0");
  if (!(m >= 1.0)) throw domain_error("chernoff_prediction: m must be >= 1");
  return std::exp(-snr * m);
}

}  // namespace mqi
