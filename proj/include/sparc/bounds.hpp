#pragma once

#include <vector>

namespace sparc {

// Regularized incomplete beta I_x(a, b) by continued fraction.
double regularized_incomplete_beta(double a, double b, double x);

// CDF of the noncentral t distribution with nu degrees of freedom and
// noncentrality delta, evaluated by the Poisson-mixture-of-incomplete-beta
// series swept outward from the Poisson mode (stable for large delta^2).
double noncentral_t_cdf(double x, double delta, double nu);

// Half-angle of the cone that a codeword claims when M codewords equally
// partition the unit sphere surface in n real dimensions:
//   integral_0^theta sin^(n-2) / integral_0^pi sin^(n-2) = 1/M,
// solved by bisection to 1e-12. codebook_size may be fractional (2^N_b).
double cone_half_angle(int n_real_dims, double codebook_size);

struct SpbConfig {
  int n_complex = 1;           // complex code length N (2N real dimensions)
  double codebook_size = 2.0;  // M = 2^N_b
  double snr_per_cplx_dim = 1.0;  // P: received SNR per complex dimension at alpha = 1
  int n_antennas = 1;             // D, alpha ~ Gamma(D, 1)
  int quad_points = 96;
};

// Coherent sphere-packing lower bound,
//   P_e = E_alpha[ nctcdf(sqrt(2N-1) cot(theta), sqrt(2N alpha P), 2N-1) ],
// alpha ~ Gamma(D, 1), averaged by composite Gauss-Legendre quadrature over
// geometrically refined panels (quad_points per panel) with a doubling
// refinement check (NumericGuard if the refinement moves more than 1e-6).
double coherent_spb(const SpbConfig& cfg);

// Gauss-Laguerre nodes/weights for weight e^{-x} on [0, inf).
void gauss_laguerre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Bound over an Eb/N0 grid for an (N, N_b) code with energy E_s = K and
// D antennas; shares ebn0_to_sigma_v with the channel module and maps
// P = E_s / (N sigma_v^2).
std::vector<double> spb_curve(int n_complex, int n_bits, double symbol_energy,
                              int n_antennas, const std::vector<double>& ebn0_grid_db,
                              int quad_points = 96);

}  // namespace sparc
