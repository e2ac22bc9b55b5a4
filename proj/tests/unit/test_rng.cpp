#include <doctest.h>

#include <set>

#include "badlab/rng.hpp"

using namespace badlab;

TEST_CASE("Philox4x32-10 known-answer vectors") {
  using B = Philox::Block;
  CHECK(Philox::apply(B{0, 0, 0, 0}, {0, 0}) == B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox::apply(B{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox::apply(B{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct") {
  Philox a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.next_u64();
    REQUIRE(x == b.next_u64());
    seen.insert(x);
    seen.insert(c.next_u64());
    seen.insert(d.next_u64());
  }
  CHECK(seen.size() == 3000);
}

TEST_CASE("uniform_below stays in range and covers it") {
  Philox g(1, 0);
  std::vector<int> counts(7);
  for (int i = 0; i < 7000; ++i) {
    Int v = g.uniform_below(Int(7));
    REQUIRE((v >= 0 && v < 7));
    ++counts[v.get_ui()];
  }
  for (int c : counts) CHECK((c > 850 && c < 1150));
  CHECK(g.uniform_below(Int(1)) == 0);
}

TEST_CASE("uniform_dyadic lands on the grid inside the interval") {
  Philox g(5, 3);
  const Rat lo(-2, 3), hi(5, 7);
  for (int i = 0; i < 2000; ++i) {
    Rat x = g.uniform_dyadic(lo, hi, 64);
    REQUIRE(lo <= x);
    REQUIRE(x <= hi);
    REQUIRE(Rat(x * Rat(Int(1) << 64)).get_den() == 1);
  }
  Rat mean(0);
  for (int i = 0; i < 4000; ++i) mean += g.uniform_dyadic(Rat(0), Rat(1), 32);
  mean /= 4000;
  CHECK(abs(mean - Rat(1, 2)) < Rat(3, 100));
}
