#include "badlab/rng.hpp"

namespace badlab {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

}  // namespace

Philox::Block Philox::apply(Block c, Key k) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k[0] += kW0;
      k[1] += kW1;
    }
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
  return c;
}

Philox::Philox(std::uint64_t seed, std::uint64_t stream)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, stream_(stream) {}

std::uint32_t Philox::next_u32() {
  if (used_ == 4) {
    Block ctr{static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
              static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    buffer_ = apply(ctr, key_);
    ++counter_;
    used_ = 0;
  }
  return buffer_[used_++];
}

std::uint64_t Philox::next_u64() {
  std::uint64_t lo = next_u32();
  std::uint64_t hi = next_u32();
  return (hi << 32) | lo;
}

Int Philox::uniform_below(const Int& n) {
  if (n <= 0) throw DomainError("uniform_below: bound must be positive");
  if (n == 1) return Int(0);
  const Int top = n - 1;
  const std::size_t bits = mpz_sizeinbase(top.get_mpz_t(), 2);
  for (;;) {
    Int v(0);
    std::size_t have = 0;
    while (have < bits) {
      v <<= 32;
      v += next_u32();
      have += 32;
    }
    v >>= static_cast<mp_bitcnt_t>(have - bits);
    if (v < n) return v;
  }
}

Rat Philox::uniform_dyadic(const Rat& lo, const Rat& hi, unsigned frac_bits) {
  if (hi < lo) throw DomainError("uniform_dyadic: empty interval");
  Int scale(1);
  scale <<= frac_bits;
  Int a = ceil_int(lo * scale);
  Int b = floor_int(hi * scale);
  if (b < a) throw DomainError("uniform_dyadic: no dyadic point at this resolution");
  return make_rat(a + uniform_below(b - a + 1), scale);
}

}  // namespace badlab
