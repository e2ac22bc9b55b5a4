#include <doctest.h>

#include <set>

#include "badlab/presets.hpp"
#include "badlab/series.hpp"
#include "oracles.hpp"

using namespace badlab;
using testing::Gen;

namespace {

const RateFunction kInv = RateFunction::power_law(Rat(1), Rat(1));
const RateFunction kRoot = RateFunction::power_law(Rat(1), Rat(1, 2));

Rat exact(const RateValue& v) {
  REQUIRE(std::holds_alternative<Rat>(v));
  return std::get<Rat>(v);
}

bool positive(const RateValue& v) { return to_interval(v).lo > 0; }

// Strictly greater, decided by enclosures that are refined until they
// separate (or found equal when both are exact).
bool greater(const RateValue& x, const RateValue& y) { return to_interval(x).lo > to_interval(y).hi; }

SeriesInstance log_instance(const Rat& delta) {
  return SeriesInstance{kRoot, RateFunction::power_log(Rat(1), Rat(1, 2), delta, Rat(3)), Rat(1), 1, 0};
}

}  // namespace

TEST_CASE("mu_term examples") {
  CHECK(exact(mu_term(4, Rat(1), kRoot, 1, 0)) == 8);
  CHECK(exact(mu_term(9, Rat(1), kRoot, 2, 0)) == 729);
  const HPInterval m = to_interval(mu_term(10, Rat(2), RateFunction::power_log(Rat(1), Rat(1, 2), Rat(1), Rat(2)), 1, 0));
  CHECK(m.contains(parse_rat("1339732201211343872897926685110051742587/10000000000000000000000000000000000000")));
  CHECK(m.width() < Rat(1, 1000000000000));
  CHECK_THROWS_AS(mu_term(4, Rat(1), kRoot, 1, 1), PreconditionError);
}

TEST_CASE("lambda_term examples") {
  CHECK(exact(lambda_term(1, Rat(1), kInv, 1)) == Rat(3, 4));
  CHECK(exact(lambda_term(2, Rat(1), kInv, 2)) == Rat(65, 1296));
  const HPInterval l = to_interval(lambda_term(10, Rat(1), RateFunction::power_log(Rat(1), Rat(1, 2), Rat(2), Rat(2)), 1));
  CHECK(l.lo > 0);
  CHECK(l.contains(parse_rat("1197366315779517505296505031693449487/1000000000000000000000000000000000000000")));
}

TEST_CASE("partial_sum examples") {
  const SeriesInstance inv{kInv, kInv, Rat(1), 1, 0};
  auto s = partial_sum(10, inv);
  REQUIRE(s.sums.size() == 10);
  CHECK(s.first_T == 1);
  // Independent closed form of each term: 1 - T^2 / (T+1)^2.
  Rat ref(0);
  for (long T = 1; T <= 10; ++T) ref += 1 - Rat(T * T, (T + 1) * (T + 1));
  CHECK(exact(s.sums.back()) == ref);
  CHECK(s.final_width == 0);

  auto one = partial_sum(1, inv);
  CHECK(exact(one.sums[0]) == exact(mu_term(1, Rat(1), kInv, 1, 0)) * exact(lambda_term(1, Rat(1), kInv, 1)));

  auto slow = partial_sum(4000, log_instance(Rat(2)));
  for (std::size_t i = 1; i < slow.sums.size(); ++i) REQUIRE(greater(slow.sums[i], slow.sums[i - 1]));
  const Rat s1 = to_interval(slow.sums[999 - 2]).midpoint(), s2 = to_interval(slow.sums[1999 - 2]).midpoint(),
            s4 = to_interval(slow.sums[3999 - 2]).midpoint();
  CHECK(s4 - s2 < s2 - s1);
  CHECK(slow.final_width < Rat(1, 1000000000));
}

TEST_CASE("exponent analysis") {
  auto conv = exponent_analysis(log_instance(Rat(2)));
  CHECK(conv.exponent == -1);
  CHECK(conv.log_exponent == 2);
  CHECK(conv.converges);
  CHECK_FALSE(conv.boundary);

  auto div = exponent_analysis(log_instance(Rat(1, 2)));
  CHECK_FALSE(div.converges);

  auto edge = exponent_analysis(log_instance(Rat(1)));
  CHECK_FALSE(edge.converges);
  CHECK(edge.boundary);

  // With b >= 1 every delta converges.
  auto sub = exponent_analysis(SeriesInstance{kRoot, RateFunction::power_log(Rat(1), Rat(1, 2), Rat(0), Rat(3)), Rat(1), 2, 1});
  CHECK(sub.converges);
}

TEST_CASE("convergence diagnostic examples") {
  auto conv = convergence_diagnostic(1000, 3, log_instance(Rat(2)));
  CHECK(conv.verdict == Verdict::Converging);
  CHECK(conv.agrees);
  CHECK(conv.increments.size() == 3);

  auto div = convergence_diagnostic(1000, 3, log_instance(Rat(1, 2)));
  CHECK(div.verdict == Verdict::Diverging);
  CHECK(div.agrees);

  auto edge = convergence_diagnostic(1000, 3, log_instance(Rat(1)));
  CHECK(edge.verdict == Verdict::Diverging);
  CHECK(edge.analysis.boundary);
  CHECK(edge.evidence.find("boundary") != std::string::npos);

  CHECK_THROWS_AS(convergence_diagnostic(999, 2, log_instance(Rat(2))), DomainError);
}

TEST_CASE("packing ratio on the real line has a closed form") {
  PackingInstance inst{LiftedSpan::lift(AffineSubspace({Rat(0)}, {{Rat(1)}})), SeriesInstance{kInv, kInv, Rat(1), 1, 0},
                       std::nullopt};
  auto scan = packing_ratio_scan(1, 40, inst);
  REQUIRE(scan.rows.size() == 40);
  for (const auto& row : scan.rows) {
    const long T = row.T;
    REQUIRE(row.pi_count == static_cast<std::uint64_t>((T + 1) * (2 * T + 1)));
    REQUIRE(row.ratio_int.contains(Rat((T + 1) * (2 * T + 1), T * T)));
    REQUIRE(row.zeta == static_cast<std::uint64_t>(2 * T + 1));
  }
  CHECK_FALSE(scan.red_flag_int);
  CHECK(scan.median_int > 2);
  CHECK(scan.median_int < 2.2);
}

TEST_CASE("cumulative zeta equals the union of independently counted layers") {
  const auto& pair = preset("cbrt2_pair").value;
  LiftedSpan a = LiftedSpan::lift(AffineSubspace(pair, {{Rat(1), Rat(1)}}));
  const SeriesInstance si{kRoot, RateFunction::power_log(Rat(1), Rat(1, 2), Rat(2), Rat(3)), Rat(2), 1, 0};
  auto scan = packing_ratio_scan(2, 14, PackingInstance{a, si, std::nullopt});
  std::set<LatticePoint> uni;
  for (long j = first_index(si); j <= 14; ++j)
    for (const auto& z : testing::naive_region_forms(SlabSpec::zeta(j, si.R, a, si.phi).region())) uni.insert(z);
  // Layers before the scan start count toward the cumulative column too.
  CHECK(scan.rows.back().cum_zeta == uni.size());
  for (const auto& row : scan.rows) CHECK(row.zeta == zeta_layer(row.T, si.R, a, si.phi).count);
}

TEST_CASE("lambda positive and mu increasing on random admissible instances") {
  Gen g(61);
  int tested = 0;
  while (tested < 60) {
    const RateFunction psi = g.rate();
    const RateFunction phi = g.rate();
    if (!psi.tends_to_zero() && !phi.tends_to_zero()) continue;
    if (!admissible_pair(psi, phi, Rat(200)).ok) continue;
    const long a = g.integer(1, 3);
    const SeriesInstance si{psi, phi, make_rat(Int(g.integer(2, 6)), Int(2)), a, g.integer(0, a - 1)};
    ++tested;
    const long T0 = first_index(si);
    RateValue prev = mu_term(T0, si.R, psi, si.a, si.b);
    for (long T = T0; T <= T0 + 150; ++T) {
      REQUIRE(positive(lambda_term(T, si.R, phi, si.a)));
      RateValue next = mu_term(T + 1, si.R, psi, si.a, si.b);
      REQUIRE(greater(next, prev));
      prev = next;
    }
  }
}

TEST_CASE("partial sums are invariant under regrouping") {
  const SeriesInstance inv{kInv, RateFunction::power_law(Rat(1), Rat(2)), Rat(2), 2, 1};
  auto s = partial_sum(500, inv);
  Rat backwards(0);
  for (std::size_t i = s.terms.size(); i-- > 0;) backwards += exact(s.terms[i]);
  CHECK(exact(s.sums.back()) == backwards);

  auto irr = partial_sum(3000, log_instance(Rat(2)));
  // Sum in blocks of 97 from the top down, with directed rounding replaced by
  // exact sums of the enclosure endpoints.
  Rat lo(0), hi(0);
  for (std::size_t end = irr.terms.size(); end > 0;) {
    const std::size_t begin = end >= 97 ? end - 97 : 0;
    Rat blo(0), bhi(0);
    for (std::size_t i = begin; i < end; ++i) {
      const HPInterval t = to_interval(irr.terms[i]);
      blo += t.lo;
      bhi += t.hi;
    }
    lo += blo;
    hi += bhi;
    end = begin;
  }
  const HPInterval total = to_interval(irr.sums.back());
  CHECK(total.lo <= hi);
  CHECK(lo <= total.hi);
  CHECK(total.width() <= irr.final_width);
}
