#include <doctest.h>

#include <cmath>
#include <random>

#include "sparc/codec.hpp"
#include "sparc/errors.hpp"
#include "test_util.hpp"

using namespace sparc;

TEST_SUITE("codec") {

TEST_CASE("all-zero and all-one bit patterns hit section extremes") {
  Dictionary d = Dictionary::build_mub_prime(7).with_sections(partition_sections(49, 3));
  // plan for L=49, K=3: 16 16 16 -> 12 bits
  REQUIRE(d.total_bits() == 12);
  std::vector<std::uint8_t> zeros(12, 0), ones(12, 1);
  SupportSet s0 = encode(zeros, d);
  SupportSet s1 = encode(ones, d);
  for (int k = 0; k < 3; ++k) {
    CHECK(s0.indices[k] == d.section(k).begin);
    CHECK(s1.indices[k] == d.section(k).end - 1);
  }
}

TEST_CASE("trailing 1 bit lands on offset 1 of the last section") {
  // positional binary oracle on a (1024 x 4) plan
  Dictionary d =
      Dictionary::build_mub_prime(67).with_sections(partition_sections(67 * 67, 4));
  REQUIRE(d.total_bits() == 40);
  std::vector<std::uint8_t> bits(40, 0);
  bits[39] = 1;
  SupportSet s = encode(bits, d);
  CHECK(s.indices[0] == d.section(0).begin);
  CHECK(s.indices[1] == d.section(1).begin);
  CHECK(s.indices[2] == d.section(2).begin);
  CHECK(s.indices[3] == d.section(3).begin + 1);
}

TEST_CASE("encode validates the bit length") {
  Dictionary d = Dictionary::build_mub_prime(5).with_sections(partition_sections(25, 2));
  CHECK_THROWS_AS(encode(std::vector<std::uint8_t>(3, 0), d), ConfigError);
}

TEST_CASE("bijection over 1000 random messages") {
  Dictionary d = Dictionary::build_mub_prime(13).with_sections(partition_sections(169, 2));
  std::mt19937 gen(123);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<std::uint8_t> bits(d.total_bits());
    for (auto& b : bits) b = gen() & 1;
    CHECK(decode_support(encode(bits, d), d) == bits);
  }
}

TEST_CASE("decode_support rejects out-of-section indices") {
  Dictionary d = Dictionary::build_mub_prime(5).with_sections(partition_sections(25, 2));
  SupportSet bad;
  bad.indices = {0, 0};  // second index is inside section 0
  CHECK_THROWS_AS(decode_support(bad, d), ConfigError);
}

TEST_CASE("codeword equals A x and K=1 support is the bare column") {
  Dictionary d = Dictionary::build_mub_prime(7).with_sections(partition_sections(49, 2));
  std::mt19937 gen(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::uint8_t> bits(d.total_bits());
    for (auto& b : bits) b = gen() & 1;
    SupportSet s = encode(bits, d);
    Eigen::VectorXcd cw = to_codeword(s, d);
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(d.n_cols());
    for (int idx : s.indices) x(idx) = 1.0;
    CHECK((cw - d.columns() * x).norm() < 1e-12);
  }
  Dictionary d1 = Dictionary::build_mub_prime(7).with_sections(std::vector<int>{32});
  SupportSet single;
  single.indices = {11};
  CHECK((to_codeword(single, d1) - d1.columns().col(11)).norm() == 0.0);
}

TEST_CASE("orthogonal support gives ||s||^2 = K exactly") {
  // sections carved out of one MUB basis are orthonormal
  Dictionary d = Dictionary::build_mub_prime(13).with_sections(std::vector<int>{8, 4});
  std::mt19937 gen(9);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::uint8_t> bits(d.total_bits());
    for (auto& b : bits) b = gen() & 1;
    double e = to_codeword(encode(bits, d), d).squaredNorm();
    CHECK(e == doctest::Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("K=2 energy stays inside the coherence bound on MUB(5)") {
  Dictionary d = Dictionary::build_mub_prime(5).with_sections(partition_sections(25, 2));
  const double mu = 1.0 / std::sqrt(5.0);
  std::mt19937 gen(31);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::uint8_t> bits(d.total_bits());
    for (auto& b : bits) b = gen() & 1;
    double e = to_codeword(encode(bits, d), d).squaredNorm();
    CHECK(e >= 2.0 - 2.0 * mu - 1e-12);
    CHECK(e <= 2.0 + 2.0 * mu + 1e-12);
  }
}

// The E_s = K convention is exact when the section means are orthogonal
// (sections inside one basis); for generic plans the exact expectation is
// K + 2 sum_{k<k'} Re<abar_k, abar_k'> with abar the section mean column.
TEST_CASE("mean codeword energy: exact for same-basis sections, oracle otherwise") {
  std::mt19937 gen(77);
  auto mean_energy = [&](const Dictionary& d, int n_msgs) {
    double acc = 0;
    for (int t = 0; t < n_msgs; ++t) {
      std::vector<std::uint8_t> bits(d.total_bits());
      for (auto& b : bits) b = gen() & 1;
      acc += to_codeword(encode(bits, d), d).squaredNorm();
    }
    return acc / n_msgs;
  };
  auto exact_mean = [](const Dictionary& d) {
    double k = d.n_sections();
    double bias = 0;
    for (int a = 0; a < d.n_sections(); ++a)
      for (int b = a + 1; b < d.n_sections(); ++b) {
        Eigen::VectorXcd ma = Eigen::VectorXcd::Zero(d.n_rows());
        Eigen::VectorXcd mb = Eigen::VectorXcd::Zero(d.n_rows());
        for (int c = d.section(a).begin; c < d.section(a).end; ++c) ma += d.columns().col(c);
        for (int c = d.section(b).begin; c < d.section(b).end; ++c) mb += d.columns().col(c);
        ma /= d.section(a).size();
        mb /= d.section(b).size();
        bias += 2.0 * std::real(ma.dot(mb));
      }
    return k + bias;
  };

  const int n = 20000;
  // same-basis sections on MUB(7): expectation is exactly K
  Dictionary db = Dictionary::build_mub_prime(7).with_sections(std::vector<int>{4, 2});
  double m1 = mean_energy(db, n);
  CHECK(exact_mean(db) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(m1 == doctest::Approx(2.0).epsilon(0.02));  // ~3 s.e. head room

  // default partition on MUB(7), K=4: Monte Carlo matches the exact oracle
  Dictionary dg = Dictionary::build_mub_prime(7).with_sections(partition_sections(49, 4));
  double m2 = mean_energy(dg, n);
  double expect = exact_mean(dg);
  // s.e. of the mean is below 0.02 here; allow 3x
  CHECK(m2 == doctest::Approx(expect).epsilon(0.06 / expect));
}

TEST_CASE("code rate bpcu") {
  SectionPlan p40 = partition_sections(4096, 4);
  CHECK(code_rate(p40, 64, true) == doctest::Approx(0.3125));
  SectionPlan p72 = partition_sections(4096, 8);
  CHECK(code_rate(p72, 64, true) == doctest::Approx(0.5625));
  SectionPlan p1;
  p1.sizes = {1};
  p1.bits_per_section = {0};
  p1.total_bits = 0;
  CHECK(code_rate(p1, 64, true) == 0.0);
  CHECK(code_rate(p40, 64, false) == doctest::Approx(0.625));
}

}  // TEST_SUITE
