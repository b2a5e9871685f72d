#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

namespace sparc {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
//
// A stream is addressed by (seed, stream, substream); draws inside a stream
// walk a 64-bit block counter. Any draw is therefore a pure function of
// (seed, stream, substream, position), which is what makes parallel Monte
// Carlo trials replayable independent of scheduling order: the harness keys
// one stream per (point, trial).
class Philox {
 public:
  Philox(std::uint64_t seed, std::uint32_t stream, std::uint32_t substream)
      : key0_(static_cast<std::uint32_t>(seed)),
        key1_(static_cast<std::uint32_t>(seed >> 32)),
        stream_(stream),
        substream_(substream) {}

  std::uint32_t next_u32() {
    if (pos_ == 4) refill();
    return buf_[pos_++];
  }

  std::uint64_t next_u64() {
    std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  // uniform in [0, 1), 53-bit resolution
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // standard normal via Box-Muller, spare cached
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  // CN(0, variance): independent real/imag parts with variance/2 each
  std::complex<double> cnormal(double variance) {
    double s = std::sqrt(0.5 * variance);
    double re = normal();
    double im = normal();
    return {s * re, s * im};
  }

 private:
  static std::array<std::uint32_t, 4> block(std::uint32_t c0, std::uint32_t c1,
                                            std::uint32_t c2, std::uint32_t c3,
                                            std::uint32_t k0, std::uint32_t k1) {
    for (int r = 0; r < 10; ++r) {
      if (r) {
        k0 += 0x9E3779B9u;
        k1 += 0xBB67AE85u;
      }
      std::uint64_t p0 = std::uint64_t(0xD2511F53u) * c0;
      std::uint64_t p1 = std::uint64_t(0xCD9E8D57u) * c2;
      std::uint32_t n0 = std::uint32_t(p1 >> 32) ^ c1 ^ k0;
      std::uint32_t n1 = std::uint32_t(p1);
      std::uint32_t n2 = std::uint32_t(p0 >> 32) ^ c3 ^ k1;
      std::uint32_t n3 = std::uint32_t(p0);
      c0 = n0;
      c1 = n1;
      c2 = n2;
      c3 = n3;
    }
    return {c0, c1, c2, c3};
  }

  void refill() {
    buf_ = block(static_cast<std::uint32_t>(counter_),
                 static_cast<std::uint32_t>(counter_ >> 32), substream_, stream_,
                 key0_, key1_);
    ++counter_;
    pos_ = 0;
  }

  std::uint32_t key0_, key1_, stream_, substream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int pos_ = 4;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Stream-id layout shared by the harness so that distinct uses of the same
// master seed never collide: top byte = kind, low bytes = caller payload.
enum class StreamKind : std::uint32_t {
  trial = 0,     // BLER sweep trial data (message, channel, noise)
  se_draw = 1,   // offline state-evolution Monte Carlo draws
  generic = 2,   // everything else (tests, tools)
};

inline std::uint32_t stream_id(StreamKind kind, std::uint32_t payload) {
  return (static_cast<std::uint32_t>(kind) << 24) | (payload & 0x00FFFFFFu);
}

}  // namespace sparc
