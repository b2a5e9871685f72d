#include "sparc/channel.hpp"

#include <cmath>

#include "sparc/errors.hpp"

namespace sparc {

ChannelRealization sample_channel(int n_antennas, double sigma_h_sq, Philox& rng) {
  if (n_antennas < 1) throw ConfigError("sample_channel: need at least one antenna");
  if (sigma_h_sq < 0) throw ConfigError("sample_channel: negative channel variance");
  ChannelRealization ch;
  ch.sigma_h_sq = sigma_h_sq;
  ch.h.resize(n_antennas);
  for (int i = 0; i < n_antennas; ++i) ch.h(i) = rng.cnormal(sigma_h_sq);
  return ch;
}

Observation transmit(const Eigen::VectorXcd& s, const ChannelRealization& ch,
                     double sigma_v_sq, Philox& rng) {
  if (sigma_v_sq < 0) throw ConfigError("transmit: negative noise variance");
  const int n = static_cast<int>(s.size());
  const int d = static_cast<int>(ch.h.size());
  Observation obs;
  obs.sigma_v_sq = sigma_v_sq;
  obs.Y.resize(n, d);
  for (int i = 0; i < d; ++i) {
    for (int r = 0; r < n; ++r)
      obs.Y(r, i) = ch.h(i) * s(r) + (sigma_v_sq > 0 ? rng.cnormal(sigma_v_sq)
                                                     : std::complex<double>(0, 0));
  }
  return obs;
}

double ebn0_to_sigma_v(double ebn0_db, int n_bits, double symbol_energy) {
  if (n_bits < 1) throw ConfigError("ebn0_to_sigma_v: need a positive bit count");
  double eb = symbol_energy / static_cast<double>(n_bits);
  return eb * std::pow(10.0, -ebn0_db / 10.0);
}

}  // namespace sparc
