#pragma once

// Philox4x32-10 counter-based generator. A (seed, stream) pair fixes the
// whole sequence, so sample i is reproducible regardless of how the work is
// split across threads.

#include <array>
#include <cstdint>

#include "badlab/exactnum.hpp"

namespace badlab {

class Philox {
 public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr const char* kName = "philox4x32-10";

  /// The raw bijection: ten rounds on `counter` under `key`.
  static Block apply(Block counter, Key key);

  Philox(std::uint64_t seed, std::uint64_t stream);

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  /// Uniform integer in [0, n), n > 0, by rejection on ceil(log2 n) bits.
  Int uniform_below(const Int& n);

  /// Uniform dyadic k / 2^frac_bits in [lo, hi].
  Rat uniform_dyadic(const Rat& lo, const Rat& hi, unsigned frac_bits = 64);

 private:
  Key key_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  Block buffer_{};
  unsigned used_ = 4;
};

}  // namespace badlab
