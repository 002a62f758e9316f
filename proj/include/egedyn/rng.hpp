#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string_view>

namespace ege::rng {

// Philox4x32-10 counter-based block cipher (Salmon et al., SC'11).
// Chosen over <random> engines because paths must be bitwise reproducible
// across platforms and independent of thread scheduling: every variate is a
// pure function of (key, counter).
struct Philox4x32 {
  static std::array<uint32_t, 4> block(const std::array<uint32_t, 2>& key,
                                       const std::array<uint32_t, 4>& ctr);
};

// One independent substream of variates, addressed by (seed, stream id).
// The key holds the seed, counter words 2..3 hold the stream id, and words
// 0..1 count blocks within the stream: 2^64 streams of 2^64 blocks each.
class Stream {
 public:
  Stream(uint64_t seed, uint64_t stream_id);

  uint32_t next_u32();
  uint64_t next_u64();
  double uniform_closed();  // (0, 1], safe for log()
  double uniform_half();    // [0, 1)
  double normal();          // N(0,1), Box-Muller with pair caching
  std::complex<double> normal_pair();  // (n1, n2) as re/im, consumes one BM pair

 private:
  std::array<uint32_t, 2> key_;
  uint64_t stream_;
  uint64_t block_ = 0;
  std::array<uint32_t, 4> buf_{};
  int buf_used_ = 4;  // force refill on first use
  double spare_ = 0.0;
  bool has_spare_ = false;

  void refill();
};

// Decorrelates the streams of unrelated estimators that share one user seed:
// each operation derives its own 64-bit seed from (seed, tag). FNV-1a over
// the tag, mixed with splitmix64.
uint64_t derive_seed(uint64_t seed, std::string_view tag);

}  // namespace ege::rng
