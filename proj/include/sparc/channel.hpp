#pragma once

#include <Eigen/Dense>

#include "sparc/rng.hpp"

namespace sparc {

struct ChannelRealization {
  Eigen::VectorXcd h;  // one complex gain per receive antenna
  double sigma_h_sq = 0.0;
};

struct Observation {
  Eigen::MatrixXcd Y;  // N x D, column i is the i-th antenna's receive vector
  double sigma_v_sq = 0.0;
};

// h_i ~ CN(0, sigma_h_sq), i.i.d. across antennas
ChannelRealization sample_channel(int n_antennas, double sigma_h_sq, Philox& rng);

// y_i = h_i s + v_i with v_i ~ CN(0, sigma_v_sq I_N)
Observation transmit(const Eigen::VectorXcd& s, const ChannelRealization& ch,
                     double sigma_v_sq, Philox& rng);

// sigma_v^2 = (E_s / N_b) * 10^(-ebn0_db/10); N_0 = sigma_v^2 for complex
// codewords, E_b = E_s / N_b
double ebn0_to_sigma_v(double ebn0_db, int n_bits, double symbol_energy);

}  // namespace sparc
