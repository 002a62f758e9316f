#include "egedyn/rng.hpp"

#include <cmath>

namespace ege::rng {

namespace {

constexpr uint32_t kMul0 = 0xD2511F53u;
constexpr uint32_t kMul1 = 0xCD9E8D57u;
constexpr uint32_t kWeyl0 = 0x9E3779B9u;
constexpr uint32_t kWeyl1 = 0xBB67AE85u;

inline void round_once(std::array<uint32_t, 4>& x, const std::array<uint32_t, 2>& k) {
  const uint64_t p0 = uint64_t(kMul0) * x[0];
  const uint64_t p1 = uint64_t(kMul1) * x[2];
  const uint32_t hi0 = uint32_t(p0 >> 32), lo0 = uint32_t(p0);
  const uint32_t hi1 = uint32_t(p1 >> 32), lo1 = uint32_t(p1);
  x = {hi1 ^ x[1] ^ k[0], lo1, hi0 ^ x[3] ^ k[1], lo0};
}

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

std::array<uint32_t, 4> Philox4x32::block(const std::array<uint32_t, 2>& key,
                                          const std::array<uint32_t, 4>& ctr) {
  std::array<uint32_t, 4> x = ctr;
  std::array<uint32_t, 2> k = key;
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      k[0] += kWeyl0;
      k[1] += kWeyl1;
    }
    round_once(x, k);
  }
  return x;
}

Stream::Stream(uint64_t seed, uint64_t stream_id)
    : key_{uint32_t(seed), uint32_t(seed >> 32)}, stream_(stream_id) {}

void Stream::refill() {
  const std::array<uint32_t, 4> ctr = {uint32_t(block_), uint32_t(block_ >> 32),
                                       uint32_t(stream_), uint32_t(stream_ >> 32)};
  buf_ = Philox4x32::block(key_, ctr);
  ++block_;
  buf_used_ = 0;
}

uint32_t Stream::next_u32() {
  if (buf_used_ >= 4) refill();
  return buf_[buf_used_++];
}

uint64_t Stream::next_u64() {
  const uint64_t lo = next_u32();
  const uint64_t hi = next_u32();
  return lo | (hi << 32);
}

double Stream::uniform_closed() {
  return double((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double Stream::uniform_half() {
  return double(next_u64() >> 11) * 0x1.0p-53;
}

double Stream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform_closed();
  const double u2 = uniform_half();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

std::complex<double> Stream::normal_pair() {
  const double x = normal();
  const double y = normal();
  return {x, y};
}

uint64_t derive_seed(uint64_t seed, std::string_view tag) {
  uint64_t h = 0xCBF29CE484222325ull;  // FNV-1a offset basis
  for (const char c : tag) {
    h ^= uint8_t(c);
    h *= 0x100000001B3ull;
  }
  return splitmix64(seed ^ h);
}

}  // namespace ege::rng
