#include <doctest.h>

#include <cmath>
#include <random>

#include "sparc/bounds.hpp"
#include "sparc/channel.hpp"
#include "sparc/errors.hpp"

using namespace sparc;

TEST_SUITE("bounds") {

TEST_CASE("nctcdf: central symmetry and limits") {
  CHECK(noncentral_t_cdf(0.0, 0.0, 10.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(noncentral_t_cdf(1e12, 3.0, 7.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(noncentral_t_cdf(-1e12, 3.0, 7.0) == doctest::Approx(0.0).scale(1).epsilon(1e-12));
  // central case agrees with the symmetric incomplete-beta route
  for (double x : {0.3, 1.7, 4.2}) {
    double nu = 9.0;
    double direct = 1.0 - 0.5 * regularized_incomplete_beta(nu / 2, 0.5, nu / (nu + x * x));
    CHECK(noncentral_t_cdf(x, 0.0, nu) == doctest::Approx(direct).epsilon(1e-12));
    CHECK(noncentral_t_cdf(-x, 0.0, nu) == doctest::Approx(1.0 - direct).epsilon(1e-12));
  }
}

TEST_CASE("nctcdf matches a sampling oracle at (1.5, 2, 10)") {
  // (Z + delta) / sqrt(chi2_nu / nu); 10^6 samples here, the acceptance
  // suite runs the 10^7 version
  std::mt19937_64 gen(424242);
  std::normal_distribution<double> z(0.0, 1.0);
  std::gamma_distribution<double> chi(5.0, 2.0);  // chi^2 with nu = 10
  const long n = 1000000;
  long hits = 0;
  for (long i = 0; i < n; ++i)
    if ((z(gen) + 2.0) / std::sqrt(chi(gen) / 10.0) <= 1.5) ++hits;
  double mc = static_cast<double>(hits) / n;
  double se = std::sqrt(mc * (1.0 - mc) / n);
  CHECK(std::abs(noncentral_t_cdf(1.5, 2.0, 10.0) - mc) < 3.0 * se);
}

TEST_CASE("nctcdf handles large noncentrality without underflow tricks") {
  // delta^2/2 ~ 8e3 forces the mode-centered sweep
  double lo = noncentral_t_cdf(100.0, 127.0, 133.0);
  double hi = noncentral_t_cdf(160.0, 127.0, 133.0);
  CHECK(lo > 0.0);
  CHECK(lo < 0.5);
  CHECK(hi > 0.5);
  CHECK(hi <= 1.0);
  // monotone in x
  double prev = 0.0;
  for (double x : {50.0, 90.0, 110.0, 127.0, 150.0, 300.0}) {
    double v = noncentral_t_cdf(x, 127.0, 133.0);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("cone half-angle: hemispheres, shrinkage, 3d closed form") {
  CHECK(cone_half_angle(8, 2.0) == doctest::Approx(M_PI / 2).epsilon(1e-12));
  // theta with cap fraction 1/4 in R^3: cos(theta) = 1/2
  CHECK(cone_half_angle(3, 4.0) == doctest::Approx(M_PI / 3).epsilon(1e-9));
  double prev = M_PI;
  for (double m : {2.0, 8.0, 1e3, 1e9, std::exp2(40.0)}) {
    double th = cone_half_angle(134, m);
    CHECK(th < prev);
    CHECK(th > 0.0);
    prev = th;
  }
}

TEST_CASE("gauss-laguerre weights integrate the gamma density to 1") {
  std::vector<double> x, w;
  gauss_laguerre(96, x, w);
  double s0 = 0, s3 = 0;
  for (int i = 0; i < 96; ++i) {
    s0 += w[i];
    s3 += w[i] * x[i] * x[i] * x[i] / 6.0;  // Gamma(4,1) density normalization
  }
  CHECK(s0 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(s3 == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("gauss-legendre integrates low-order polynomials exactly") {
  std::vector<double> x, w;
  gauss_legendre(16, x, w);
  double s0 = 0, s2 = 0;
  for (int i = 0; i < 16; ++i) {
    s0 += w[i];
    s2 += w[i] * x[i] * x[i];
  }
  CHECK(s0 == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(s2 == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("spb: bounded, refinement-stable, vanishing at large power") {
  SpbConfig cfg;
  cfg.n_complex = 64;
  cfg.codebook_size = std::exp2(40.0);
  cfg.snr_per_cplx_dim = 1e3;
  cfg.n_antennas = 4;
  double tiny = coherent_spb(cfg);
  CHECK(tiny >= 0.0);
  CHECK(tiny < 1e-6);

  cfg.snr_per_cplx_dim = 1.0;
  cfg.quad_points = 32;
  double a = coherent_spb(cfg);
  cfg.quad_points = 64;
  double b = coherent_spb(cfg);
  CHECK(a >= 0.0);
  CHECK(a <= 1.0);
  CHECK(std::abs(a - b) < 1e-6);
}

TEST_CASE("spb monotone non-increasing in power and in antennas") {
  SpbConfig cfg;
  cfg.n_complex = 67;
  cfg.codebook_size = std::exp2(40.0);
  cfg.n_antennas = 4;
  double prev = 1.0;
  for (double p : {0.3, 0.8, 1.5, 3.0, 7.0, 15.0}) {
    cfg.snr_per_cplx_dim = p;
    double v = coherent_spb(cfg);
    CHECK(v <= prev + 1e-12);
    prev = v;
  }
  cfg.snr_per_cplx_dim = 1.2;
  prev = 1.0;
  for (int d : {1, 2, 4, 8}) {
    cfg.n_antennas = d;
    double v = coherent_spb(cfg);
    CHECK(v <= prev + 1e-12);
    prev = v;
  }
}

TEST_CASE("spb curve maps Eb/N0 through the shared conversion") {
  std::vector<double> grid = {2.0, 8.0, 14.0};
  auto pe = spb_curve(67, 40, 4.0, 4, grid);
  REQUIRE(pe.size() == 3);
  CHECK(pe[0] > pe[1]);
  CHECK(pe[1] > pe[2]);
  // spot check the power mapping at 8 dB
  double sv = ebn0_to_sigma_v(8.0, 40, 4.0);
  SpbConfig cfg;
  cfg.n_complex = 67;
  cfg.codebook_size = std::exp2(40.0);
  cfg.snr_per_cplx_dim = 4.0 / (67 * sv);
  cfg.n_antennas = 4;
  CHECK(pe[1] == doctest::Approx(coherent_spb(cfg)).epsilon(1e-12));
}

TEST_CASE("spb config validation") {
  SpbConfig cfg;
  cfg.n_complex = 64;
  cfg.codebook_size = 1.0;
  cfg.snr_per_cplx_dim = 1.0;
  CHECK_THROWS_AS(coherent_spb(cfg), ConfigError);
  cfg.codebook_size = 16.0;
  cfg.quad_points = 8;
  CHECK_THROWS_AS(coherent_spb(cfg), ConfigError);
}

}  // TEST_SUITE
