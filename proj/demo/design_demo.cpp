// Samples one network, then compares the four cooperative designs on it.

#include <cstdio>

#include "coopsec/coopsec.hpp"

int main() {
  using namespace coopsec;

  GeometryConfig geom;  // 0.33 m wavelength, R = 5 wavelengths, -60 dBm noise
  geom.n_nodes = 20;
  geom.n_eavesdroppers = 1;
  const Scenario one = sample_scenario(geom, 2024);
  const double p0 = dbm_to_watts(5.0);

  const auto best = design::max_secrecy_single(one.h, one.G.col(0), one.noise_power, p0);
  std::printf("J=1  max secrecy at 5 dBm:        Cs = %.4f b/s/Hz\n", best.secrecy_capacity);

  const auto cheapest = design::min_power_single(one.h, one.G.col(0), one.noise_power, best.secrecy_capacity);
  std::printf("J=1  min power for that Cs:       P  = %.6e W (%zu iterations)\n",
              cheapest.solution.transmit_power, cheapest.trace.iterations);

  geom.n_eavesdroppers = 4;
  const Scenario four = sample_scenario(geom, 2024);
  const auto nulled = design::null_max_secrecy_multi(four.h, four.G, four.noise_power, p0);
  std::printf("J=4  nulling max secrecy at 5 dBm: Cs = %.4f b/s/Hz\n", nulled.secrecy_capacity);

  const auto nulled_min = design::null_min_power_multi(four.h, four.G, four.noise_power, 3.0);
  std::printf("J=4  nulling min power for 3 b/s/Hz: P = %.6e W\n", nulled_min.transmit_power);

  const double direct = direct_secrecy(p0, four.h0(), four.g0(), four.noise_power);
  std::printf("J=4  direct transmission at 5 dBm: Cs = %.4f b/s/Hz\n", direct);
  return 0;
}
