#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "mqi/smpc.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace mqi;

namespace {
const EomCoefficients kConv = eom_coefficients({60.0, 600.0});
const double kNm = 62.0;
const TargetChannel kChannel{0.01, 600.0};

// running example: TMSV input at n_s = 1e-4, perfect memory, K = 1
ConverterOutputMoments example_moments(double eta = 1.0, double n_s = 1e-4) {
  return converter_output_moments_tmsv(kConv, kNm, kChannel, {eta}, n_s);
}

double f_chain(double n_s, double eta, PnrResolution k) {
  const auto m = converter_output_moments_tmsv(kConv, kNm, kChannel, {eta}, n_s);
  const SmpcReceiver rx{optimal_reflectivity(m), k};
  return f_smpc_from_moments(rx, m, kChannel, n_s);
}
}  // namespace

TEST_CASE("converter_output_moments: running example and limits") {
  const auto m = example_moments();
  REQUIRE_THAT(m.n_cs, WithinRel(295.745606991913, 1e-12));
  REQUIRE(m.n_ci == 1e-4);
  REQUIRE_THAT(m.n_csi, WithinRel(0.000701464496140201, 1e-12));

  const auto no_target = converter_output_moments_tmsv(kConv, kNm, {0.0, 600.0}, {1.0}, 1e-4);
  REQUIRE(no_target.n_csi == 0.0);

  const auto dead_memory = converter_output_moments_tmsv(kConv, kNm, kChannel, {1e-12}, 1e-4);
  REQUIRE_THAT(dead_memory.n_ci, WithinAbs(0.0, 1e-15));
  REQUIRE_THAT(dead_memory.n_csi, WithinAbs(0.0, 1e-9));
}

TEST_CASE("converter_output_moments: generic form matches the vacuum-input specialization") {
  const double n_s = 3e-3;
  const TwoModeMoments tmsv{n_s, n_s, std::sqrt(n_s * (n_s + 1.0))};
  const auto a = converter_output_moments(kConv, kNm, kChannel, {0.7}, tmsv);
  const auto b = converter_output_moments_tmsv(kConv, kNm, kChannel, {0.7}, n_s);
  REQUIRE(a.n_cs == b.n_cs);
  REQUIRE(a.n_ci == b.n_ci);
  REQUIRE(a.n_csi == b.n_csi);
}

TEST_CASE("optimal_reflectivity: running example, limits, regime guard") {
  REQUIRE_THAT(optimal_reflectivity(example_moments()), WithinRel(3.38128437534947e-5, 1e-12));
  REQUIRE(optimal_reflectivity({5.0, 0.0, 0.0}) == 0.0);
  REQUIRE_THROWS_AS(optimal_reflectivity({0.5, 1.0, 0.0}), regime_error);
  REQUIRE_THROWS_AS(optimal_reflectivity({0.0, 1e-4, 0.0}), degenerate_error);
}

TEST_CASE("output_mode_means: running example and edge reflectivities") {
  const auto m = example_moments();
  const double r = optimal_reflectivity(m);
  const auto [n0, n1] = output_mode_means(r, m);
  REQUIRE_THAT(n0, WithinRel(0.0100999966187156, 1e-12));
  REQUIRE_THAT(n1, WithinRel(0.0101081543462625, 1e-12));
  REQUIRE(n1 >= n0);

  const ConverterOutputMoments uncorr{m.n_cs, m.n_ci, 0.0};
  const auto [u0, u1] = output_mode_means(r, uncorr);
  REQUIRE(u0 == u1);

  const auto [z0, z1] = output_mode_means(0.0, m);
  REQUIRE(z0 == m.n_ci);
  REQUIRE(z1 == m.n_ci);
  const auto [o0, o1] = output_mode_means(1.0, m);
  REQUIRE(o0 == m.n_cs);
  REQUIRE(o1 == m.n_cs);

  REQUIRE_THROWS_AS(output_mode_means(0.5, ConverterOutputMoments{1.0, 1.0, -3.0}), domain_error);
  REQUIRE_THROWS_AS(output_mode_means(1.5, m), domain_error);
}

TEST_CASE("pnr_moments: closed-form spot values") {
  const auto [m1, v1] = pnr_moments(0.1, 1L);
  REQUIRE_THAT(m1, WithinRel(1.0 / 11.0, 1e-14));
  REQUIRE_THAT(v1, WithinRel(10.0 / 121.0, 1e-13));

  const auto [m2, v2] = pnr_moments(1.0, 2L);
  REQUIRE_THAT(m2, WithinRel(0.75, 1e-14));
  REQUIRE_THAT(v2, WithinRel(0.6875, 1e-13));

  const auto [mu, vu] = pnr_moments(0.37, unbounded_resolution);
  REQUIRE(mu == 0.37);
  REQUIRE(vu == 0.37 * 1.37);

  REQUIRE(pnr_moments(0.0, 1L) == std::pair{0.0, 0.0});
  REQUIRE_THROWS_AS(pnr_moments(-0.1, 1L), domain_error);
  REQUIRE_THROWS_AS(pnr_moments(0.1, 0L), domain_error);
}

TEST_CASE("pnr_moments: equals the brute-force geometric sums") {
  for (double q = 0.0; q < 0.995; q += 0.05) {
    const double n_c = q / (1.0 - q);
    // truncate where the geometric tail drops below 1e-14
    const long n_max = q > 0.0 ? long(std::ceil(std::log(1e-14) / std::log(q))) + 1 : 1;
    for (long k = 1; k <= 20; ++k) {
      double mean = 0.0, second = 0.0;
      for (long n = 1; n <= n_max; ++n) {
        const double p = (1.0 - q) * std::pow(q, double(n));
        const double o = double(std::min(n, k));
        mean += o * p;
        second += o * o * p;
      }
      const auto [m, v] = pnr_moments(n_c, k);
      REQUIRE_THAT(m, WithinAbs(mean, 1e-10));
      REQUIRE_THAT(v, WithinAbs(second - mean * mean, 1e-10));
    }
  }
}

TEST_CASE("pnr_moments: mean grows with resolution toward the thermal mean") {
  const double n_c = 1.7;
  double prev = 0.0;
  for (long k = 1; k <= 60; ++k) {
    const double m = pnr_moments(n_c, k).first;
    REQUIRE(m >= prev);
    prev = m;
  }
  REQUIRE_THAT(prev, WithinRel(n_c, 1e-9));
}

TEST_CASE("smpc_stats: running-example SNR for both detector variants") {
  const auto m = example_moments();
  const double r = optimal_reflectivity(m);
  const auto s1 = smpc_stats({r, 1L}, m);
  REQUIRE_THAT(snr(s1.stats), WithinRel(8.06899777841703e-10, 1e-11));
  const auto su = smpc_stats({r, unbounded_resolution}, m);
  REQUIRE_THAT(snr(su.stats), WithinRel(8.15052752114209e-10, 1e-11));
  // both detector variants are asymptotically equivalent well below one photon
  REQUIRE_THAT(snr(su.stats) / snr(s1.stats), WithinRel(1.01010407301674, 1e-9));
  // documented nearness to the asymptote eta kappa n_s / (2 n_b)
  REQUIRE_THAT(snr(s1.stats) / (1e-6 / 1200.0), WithinRel(0.968279733410044, 1e-9));

  const auto no_target = converter_output_moments_tmsv(kConv, kNm, {0.0, 600.0}, {1.0}, 1e-4);
  const auto s0 = smpc_stats({optimal_reflectivity(no_target), 1L}, no_target);
  REQUIRE(s0.stats.mean0 == s0.stats.mean1);
  REQUIRE(snr(s0.stats) == 0.0);
}

TEST_CASE("f_smpc: frozen ladder toward the maximally feasible advantage") {
  REQUIRE_THAT(f_chain(1e-3, 1.0, 1L), WithinRel(1.81657311306837, 1e-11));
  REQUIRE_THAT(f_chain(1e-4, 1.0, 1L), WithinRel(1.93817326637577, 1e-11));
  REQUIRE_THAT(f_chain(1e-5, 1.0, 1L), WithinRel(1.97865572329784, 1e-11));
  REQUIRE_THAT(f_chain(1e-4, 1.0, unbounded_resolution), WithinRel(1.95775671057833, 1e-11));
  REQUIRE_THAT(f_chain(1e-4, 0.8, 1L), WithinRel(1.55551316523647, 1e-11));
  REQUIRE_THAT(f_chain(1e-4, 0.6, 1L), WithinRel(1.17088455357583, 1e-11));
}

TEST_CASE("f_smpc: monotone approach to 2 eta as the signal weakens") {
  for (double eta : {1.0, 0.8, 0.6}) {
    const double f3 = f_chain(1e-3, eta, 1L);
    const double f4 = f_chain(1e-4, eta, 1L);
    const double f5 = f_chain(1e-5, eta, 1L);
    REQUIRE(f3 < f4);
    REQUIRE(f4 < f5);
    REQUIRE(std::fabs(f5 - 2.0 * eta) < 0.05 * 2.0 * eta);
  }
}

TEST_CASE("f_smpc: the on-off penalty against unbounded counting is first order in the output mean") {
  for (double eta : {0.6, 1.0}) {
    for (double n_s : {1e-5, 1e-4, 1e-3}) {
      const auto m = converter_output_moments_tmsv(kConv, kNm, kChannel, {eta}, n_s);
      const double r = optimal_reflectivity(m);
      const auto means = output_mode_means(r, m);
      REQUIRE(means.second < 0.05);  // the dim-output regime the claim assumes
      const double f1 = f_smpc_from_moments({r, 1L}, m, kChannel, n_s);
      const double fu = f_smpc_from_moments({r, unbounded_resolution}, m, kChannel, n_s);
      REQUIRE(std::fabs(f1 - fu) < 1.5 * means.second * fu);
    }
  }
}

TEST_CASE("f_smpc: the working reflectivity is near-optimal") {
  const auto m = example_moments();
  const double r = optimal_reflectivity(m);
  const double at_r = f_smpc_from_moments({r, 1L}, m, kChannel, 1e-4);
  REQUIRE(at_r >= f_smpc_from_moments({r * 0.5, 1L}, m, kChannel, 1e-4));
  REQUIRE(at_r >= f_smpc_from_moments({r * 1.5, 1L}, m, kChannel, 1e-4));
}

TEST_CASE("f_smpc: degenerate channel and benchmark handling") {
  const TwoModeMoments tmsv{1e-4, 1e-4, std::sqrt(1e-4 * (1.0 + 1e-4))};
  const SmpcReceiver rx{1e-5, 1L};
  REQUIRE(f_smpc(rx, kConv, kNm, {0.0, 600.0}, {1.0}, tmsv) == 0.0);
  const double def = f_smpc(rx, kConv, kNm, kChannel, {1.0}, tmsv);
  const double same = f_smpc(rx, kConv, kNm, kChannel, {1.0}, tmsv, 1e-4);
  REQUIRE(def == same);
  // halving the benchmark energy doubles the reported ratio
  const double half = f_smpc(rx, kConv, kNm, kChannel, {1.0}, tmsv, 0.5e-4);
  REQUIRE_THAT(half, WithinRel(2.0 * def, 1e-12));
  REQUIRE_THROWS_AS(f_smpc(rx, kConv, kNm, kChannel, {1.0}, {0.0, 0.0, 0.0}), degenerate_error);
}
