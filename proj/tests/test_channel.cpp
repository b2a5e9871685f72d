#include <doctest.h>

#include <cmath>

#include "sparc/channel.hpp"
#include "sparc/errors.hpp"
#include "test_util.hpp"

using namespace sparc;

TEST_SUITE("channel") {

TEST_CASE("zero channel variance gives zero gains") {
  Philox rng(1, 0, 0);
  ChannelRealization ch = sample_channel(4, 0.0, rng);
  CHECK(ch.h.norm() == 0.0);
}

TEST_CASE("sum |h|^2 has mean 1 at sigma_h^2 = 1/D") {
  const int n = 100000, d = 4;
  double acc = 0, acc2 = 0;
  for (int i = 0; i < n; ++i) {
    Philox rng(99, 0, i);
    ChannelRealization ch = sample_channel(d, 0.25, rng);
    double e = ch.h.squaredNorm();
    acc += e;
    acc2 += e * e;
  }
  double mean = acc / n;
  double se = std::sqrt((acc2 / n - mean * mean) / n);
  CHECK(std::abs(mean - 1.0) < 3.0 * se);
}

TEST_CASE("fixed seed replays the channel exactly") {
  Philox a(5, 2, 3), b(5, 2, 3);
  ChannelRealization c1 = sample_channel(8, 0.5, a);
  ChannelRealization c2 = sample_channel(8, 0.5, b);
  CHECK((c1.h - c2.h).norm() == 0.0);
}

TEST_CASE("noiseless transmit is the exact outer product") {
  Philox rng(3, 0, 0);
  Eigen::VectorXcd s(3);
  s << std::complex<double>(1, 0), std::complex<double>(0, 2), std::complex<double>(-1, 1);
  ChannelRealization ch;
  ch.sigma_h_sq = 1.0;
  ch.h.resize(2);
  ch.h << std::complex<double>(1, 0), std::complex<double>(0.5, -0.5);
  Observation obs = transmit(s, ch, 0.0, rng);
  CHECK((obs.Y.col(0) - s).norm() == 0.0);
  CHECK((obs.Y.col(1) - ch.h(1) * s).norm() == 0.0);
  // rank 1: second singular value vanishes
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(obs.Y);
  CHECK(svd.singularValues()(1) < 1e-12);
}

TEST_CASE("zero codeword leaves pure noise with the right variance") {
  const int n = 50, d = 4, reps = 500;  // 10^5 entries
  double acc = 0;
  long cnt = 0;
  for (int r = 0; r < reps; ++r) {
    Philox rng(17, 1, r);
    ChannelRealization ch = sample_channel(d, 0.25, rng);
    Observation obs = transmit(Eigen::VectorXcd::Zero(n), ch, 0.3, rng);
    acc += obs.Y.squaredNorm();
    cnt += n * d;
  }
  double mean = acc / cnt;
  // per-entry |v|^2 is Exp(mean 0.3): se = 0.3/sqrt(cnt)
  CHECK(std::abs(mean - 0.3) < 3.0 * 0.3 / std::sqrt(double(cnt)));
}

TEST_CASE("transmit rejects negative noise variance") {
  Philox rng(1, 0, 0);
  ChannelRealization ch = sample_channel(2, 1.0, rng);
  CHECK_THROWS_AS(transmit(Eigen::VectorXcd::Zero(4), ch, -1.0, rng), ConfigError);
}

TEST_CASE("ebn0 conversion") {
  CHECK(ebn0_to_sigma_v(0.0, 40, 4.0) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(ebn0_to_sigma_v(10.0, 40, 4.0) == doctest::Approx(0.01).epsilon(1e-12));
  // direct formula evaluation: 12/124 * 10^(-1.4)
  double expect = 12.0 / 124.0 * std::pow(10.0, -1.4);
  CHECK(ebn0_to_sigma_v(14.0, 124, 12.0) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(expect == doctest::Approx(3.853e-3).epsilon(1e-3));
}

}  // TEST_SUITE
