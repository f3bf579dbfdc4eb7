#pragma once

#include <array>
#include <cstdint>

// Philox 4x32-10 counter-based generator (Salmon, Moraes, Dror, Shaw; SC'11).
// A (key, counter) pair maps to four 32-bit words through ten bijective
// rounds, so distinct counters yield statistically independent outputs and a
// substream is nothing more than a distinct counter prefix. That makes
// parallel and serial simulation runs bit-identical by construction.

namespace mqi {

class Philox4x32 {
 public:
  // seed selects the key; stream selects the substream (counter words 2..3).
  Philox4x32(std::uint64_t seed, std::uint64_t stream)
      : key0_(static_cast<std::uint32_t>(seed)),
        key1_(static_cast<std::uint32_t>(seed >> 32)),
        ctr_{0u, 0u, static_cast<std::uint32_t>(stream),
             static_cast<std::uint32_t>(stream >> 32)} {}

  std::uint32_t next_u32() {
    if (idx_ == 4) {
      out_ = block(ctr_, key0_, key1_);
      // 64-bit draw counter within the substream
      if (++ctr_[0] == 0u) ++ctr_[1];
      idx_ = 0;
    }
    return out_[idx_++];
  }

  // uniform double in [0, 1) with 53 random bits
  double next_double() {
    const std::uint64_t hi = next_u32() >> 5;   // 27 bits
    const std::uint64_t lo = next_u32() >> 6;   // 26 bits
    return double((hi << 26) | lo) * (1.0 / 9007199254740992.0);
  }

  // one keyed block, exposed for known-answer tests
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> c, std::uint32_t k0,
                                            std::uint32_t k1) {
    constexpr std::uint32_t mul0 = 0xD2511F53u, mul1 = 0xCD9E8D57u;
    constexpr std::uint32_t weyl0 = 0x9E3779B9u, weyl1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t(mul0) * c[0];
      const std::uint64_t p1 = std::uint64_t(mul1) * c[2];
      c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k0, static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k1, static_cast<std::uint32_t>(p0)};
      k0 += weyl0;
      k1 += weyl1;
    }
    return c;
  }

 private:
  std::uint32_t key0_, key1_;
  std::array<std::uint32_t, 4> ctr_;
  std::array<std::uint32_t, 4> out_{};
  int idx_ = 4;
};

// SplitMix64 scrambler for deriving independent row seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace mqi
