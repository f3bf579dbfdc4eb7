#include <cstdio>

#include "mqi/advantage.hpp"
#include "mqi/eom.hpp"
#include "mqi/golden_section.hpp"
#include "mqi/scene.hpp"
#include "mqi/smpc.hpp"
#include "mqi/two_mode_state.hpp"

// Headline numbers of the model, computed end to end through the library.
int main() {
  using namespace mqi;

  std::printf("== environment ==\n");
  const EomEnvironment env{0.030, 1.0e7, 1.0e10, optical_freq_from_pump_wavelength(1.064e-6)};
  const double n_m = thermal_occupation(env.freq_mech, env.temperature);
  std::printf("mechanical occupation at 10 MHz, 30 mK: %.6f\n", n_m);
  std::printf("microwave occupation at 10 GHz, 30 mK: %.3e\n",
              thermal_occupation(env.freq_microwave, env.temperature));

  std::printf("\n== state-level advantage, nu = 1.02, kappa = 0.01, n_b = 600 ==\n");
  const double nu = 1.02;
  for (double eta : {1.0, 0.8, 0.6}) {
    const double r_star = r_optimal(nu, eta);
    const double f_star = advantage_tmst({nu, r_star}, eta);
    std::printf("eta = %.1f: optimal r = %.6f, F = %.6f, crossing r = %.6f, eta_c = %.6f\n",
                eta, r_star, f_star, r_qa(nu, eta), eta_critical_tmst(nu, r_star));
  }

  std::printf("\n== device-level advantage, gamma_w = 3000 ==\n");
  for (double eta : {1.0, 0.8, 0.6}) {
    const double go_closed = gamma_o_optimal(3000.0, eta, n_m);
    const auto num = maximize_1d(
        [&](double t) { return advantage_coop({std::exp(t), 3000.0}, eta, n_m); },
        std::log(1.0), std::log(2999.0));
    std::printf("eta = %.1f: gamma_o closed form = %.3f, numeric = %.3f, F = %.6f\n", eta,
                go_closed, std::exp(num.argmax), num.max);
  }

  std::printf("\n== counting receiver, converter 60/600, n_s = 1e-4 ==\n");
  const TargetChannel ch{0.01, 600.0};
  const auto conv = eom_coefficients({60.0, 600.0});
  for (double eta : {1.0, 0.8, 0.6}) {
    const auto mom = converter_output_moments_tmsv(conv, n_m, ch, {eta}, 1e-4);
    const SmpcReceiver rx{optimal_reflectivity(mom), 1};
    const double f = f_smpc_from_moments(rx, mom, ch, 1e-4);
    std::printf("eta = %.1f: on-off receiver F = %.6f (ceiling 2 eta = %.1f)\n", eta, f,
                2.0 * eta);
  }

  std::printf("\n== idler memory over fiber, 0.14 dB/km ==\n");
  for (double km : {1.0, 10.0, 21.5, 30.0}) {
    const auto mem = memory_from_fiber(0.14, km);
    std::printf("L = %5.1f km: eta = %.6f, advantage ceiling = %.6f\n", km, mem.eta,
                2.0 * mem.eta);
  }
  return 0;
}
