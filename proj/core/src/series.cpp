#include "badlab/series.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "badlab/parallel.hpp"
#include "rate_eval.hpp"

namespace badlab {

using detail::Bounds;

HPInterval to_interval(const RateValue& v) {
  if (const Rat* r = std::get_if<Rat>(&v)) return HPInterval::point(*r);
  return std::get<HPInterval>(v);
}

std::string to_string(const RateValue& v) {
  if (const Rat* r = std::get_if<Rat>(&v)) return to_string(*r);
  return to_string(std::get<HPInterval>(v));
}

namespace {

void require_dims(long a, long b) {
  if (b < 0) throw DomainError("b must be non-negative");
  if (a <= b) throw PreconditionError("requires a > b (hypothesis 0 <= b = dim B < a = dim A)");
}

Bounds mu_bounds(long T, const Rat& R, const RateFunction& psi, long a, long b, unsigned bits) {
  Bounds x = detail::div_pos(Bounds::of_ui(static_cast<unsigned long>(T), bits),
                             detail::rate_bounds(psi, Bounds::of(R * T, bits)));
  return detail::pow_rat_pos(x, Rat(a - b));
}

// (phi(RT) / T)^a
Bounds g_bounds(long T, const Rat& R, const RateFunction& phi, long a, unsigned bits) {
  Bounds x = detail::div_pos(detail::rate_bounds(phi, Bounds::of(R * T, bits)),
                             Bounds::of_ui(static_cast<unsigned long>(T), bits));
  return detail::pow_rat_pos(x, Rat(a));
}

std::optional<Rat> g_exact(long T, const Rat& R, const RateFunction& phi, long a) {
  auto v = exact_value(phi, R * T);
  if (!v) return std::nullopt;
  return pow_int(*v / T, a);
}

}  // namespace

RateValue mu_term(long T, const Rat& R, const RateFunction& psi, long a, long b, unsigned bits) {
  require_dims(a, b);
  if (T < 1) throw DomainError("T must be at least 1");
  if (auto v = exact_value(psi, R * T)) return pow_int(Rat(T) / *v, a - b);
  return mu_bounds(T, R, psi, a, b, bits).to_interval();
}

RateValue lambda_term(long T, const Rat& R, const RateFunction& phi, long a, unsigned bits) {
  if (a < 1) throw DomainError("a must be at least 1");
  if (T < 1) throw DomainError("T must be at least 1");
  auto g0 = g_exact(T, R, phi, a);
  auto g1 = g_exact(T + 1, R, phi, a);
  if (g0 && g1) return *g0 - *g1;
  // The difference cancels; refine until the enclosure is positive.
  HPInterval out;
  for (unsigned p = bits;; p = std::min(2 * p, max_precision_bits())) {
    out = detail::sub(g_bounds(T, R, phi, a, p), g_bounds(T + 1, R, phi, a, p)).to_interval();
    if (out.lo > 0 || p >= max_precision_bits()) break;
  }
  return out;
}

RateValue series_term(long T, const SeriesInstance& inst, unsigned bits) {
  RateValue mu = mu_term(T, inst.R, inst.psi, inst.a, inst.b, bits);
  RateValue la = lambda_term(T, inst.R, inst.phi, inst.a, bits);
  const Rat* m = std::get_if<Rat>(&mu);
  const Rat* l = std::get_if<Rat>(&la);
  if (m && l) return *m * *l;
  HPInterval mi = to_interval(mu), li = to_interval(la);
  // Both factors are positive.
  Bounds x = detail::mul_pos(Bounds::of(mi.lo, bits), Bounds::of(li.lo, bits));
  Bounds y = detail::mul_pos(Bounds::of(mi.hi, bits), Bounds::of(li.hi, bits));
  return HPInterval{x.to_interval().lo, y.to_interval().hi, bits};
}

long first_index(const SeriesInstance& inst) {
  Rat start = std::max(inst.psi.domain_start(), inst.phi.domain_start());
  return std::max(1L, ceil_int(start / inst.R).get_si());
}

PartialSums partial_sum(long N, const SeriesInstance& inst, unsigned bits, long exact_limit) {
  require_dims(inst.a, inst.b);
  if (inst.R < 1) throw DomainError("R must be at least 1");
  PartialSums out;
  out.first_T = first_index(inst);
  if (N < out.first_T) return out;
  Admissibility adm = admissible_pair(inst.psi, inst.phi, inst.R * (N + 1));
  if (!adm.ok) throw PreconditionError("phi(T) <= psi(T) fails: " + adm.detail);

  for (long T = out.first_T; T <= N; ++T) out.terms.push_back(series_term(T, inst, bits));
  const bool exact = N <= exact_limit && std::all_of(out.terms.begin(), out.terms.end(), [](const RateValue& v) {
                       return std::holds_alternative<Rat>(v);
                     });
  if (exact) {
    Rat s(0);
    for (const auto& t : out.terms) {
      s += std::get<Rat>(t);
      out.sums.emplace_back(s);
    }
    out.final_width = 0;
    return out;
  }
  Bounds s = Bounds::of_ui(0, bits);
  for (const auto& t : out.terms) {
    HPInterval ti = to_interval(t);
    Bounds tb(bits);
    mpfr_set_q(tb.lo.get(), ti.lo.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(tb.hi.get(), ti.hi.get_mpq_t(), MPFR_RNDU);
    s = detail::add(s, tb);
    out.sums.emplace_back(s.to_interval());
  }
  out.final_width = to_interval(out.sums.back()).width();
  return out;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Converging: return "converging";
    case Verdict::Diverging: return "diverging";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

ExponentAnalysis exponent_analysis(const SeriesInstance& inst) {
  require_dims(inst.a, inst.b);
  const Rat ab(inst.a - inst.b);
  const Rat a(inst.a);
  ExponentAnalysis e;
  e.exponent = ab * (1 + inst.psi.alpha()) - a * (1 + inst.phi.alpha()) - 1;
  e.log_exponent = a * inst.phi.delta() - ab * inst.psi.delta();
  e.converges = e.exponent < -1 || (e.exponent == -1 && e.log_exponent > 1);
  e.boundary = e.exponent == -1 && e.log_exponent == 1;
  return e;
}

namespace {

// Sum of the terms for T in [lo, hi] at `bits` bits, chaining g(T+1) into
// the next lambda.
Bounds block_sum(long lo, long hi, const SeriesInstance& inst, unsigned bits) {
  Bounds s = Bounds::of_ui(0, bits);
  Bounds g = g_bounds(lo, inst.R, inst.phi, inst.a, bits);
  for (long T = lo; T <= hi; ++T) {
    Bounds g_next = g_bounds(T + 1, inst.R, inst.phi, inst.a, bits);
    Bounds lambda = detail::sub(g, g_next);
    if (mpfr_sgn(lambda.lo.get()) < 0) mpfr_set_ui(lambda.lo.get(), 0, MPFR_RNDD);
    Bounds mu = mu_bounds(T, inst.R, inst.psi, inst.a, inst.b, bits);
    s = detail::add(s, detail::mul_pos(mu, lambda));
    g = std::move(g_next);
  }
  return s;
}

constexpr unsigned kDiagnosticBits = 64;
constexpr long kBlock = 4096;
// Estimated log-decay exponents above this count as summable; the margin
// over 1 absorbs the finite-N bias of the estimate.
constexpr double kLogDecayThreshold = 1.25;
// Increments shrinking faster than 2^(-1/4) per doubling count as power decay.
constexpr double kPowerDecayThreshold = 0.25;

}  // namespace

ConvergenceDiagnostic convergence_diagnostic(long N, unsigned rounds, const SeriesInstance& inst, unsigned jobs) {
  if (N < 1000) throw DomainError("convergence_diagnostic requires N >= 1000");
  if (rounds < 2) throw DomainError("convergence_diagnostic requires at least 2 doubling rounds");
  if (first_index(inst) > N) throw DomainError("N below the domain start");
  ConvergenceDiagnostic d;
  d.N = N;
  d.rounds = rounds;
  d.analysis = exponent_analysis(inst);

  for (unsigned k = 1; k <= rounds; ++k) {
    const long lo = (N << (k - 1)) + 1;
    const long hi = N << k;
    const std::size_t blocks = static_cast<std::size_t>((hi - lo) / kBlock + 1);
    std::vector<std::optional<Bounds>> parts(blocks);
    parallel_for(blocks, jobs, [&](std::size_t i) {
      long b_lo = lo + static_cast<long>(i) * kBlock;
      long b_hi = std::min(hi, b_lo + kBlock - 1);
      parts[i] = block_sum(b_lo, b_hi, inst, kDiagnosticBits);
    });
    Bounds s = Bounds::of_ui(0, kDiagnosticBits);
    for (auto& p : parts) s = detail::add(s, *p);
    d.increments.push_back(s.to_interval());
  }

  bool positive = true;
  for (const auto& inc : d.increments) positive = positive && inc.lo > 0;
  for (std::size_t k = 0; k + 1 < d.increments.size(); ++k)
    d.ratios.push_back(to_double(d.increments[k + 1].midpoint()) / to_double(d.increments[k].midpoint()));

  const double rho = d.ratios.back();
  const std::size_t last = d.ratios.size();
  auto log_mid = [&](std::size_t k) { return std::log(1.5 * static_cast<double>(N) * std::ldexp(1.0, static_cast<int>(k) - 1)); };
  d.power_decay = -std::log2(rho);
  d.log_decay = -std::log(rho) / std::log(log_mid(last + 1) / log_mid(last));

  if (!positive) {
    d.numeric = Verdict::Inconclusive;
  } else if (rho >= 1) {
    d.numeric = Verdict::Diverging;
  } else if (d.power_decay > kPowerDecayThreshold) {
    d.numeric = Verdict::Converging;
  } else {
    d.numeric = d.log_decay > kLogDecayThreshold ? Verdict::Converging : Verdict::Diverging;
  }
  d.verdict = d.analysis.converges ? Verdict::Converging : Verdict::Diverging;
  d.agrees = d.numeric == d.verdict;

  std::ostringstream os;
  os << "increments";
  for (const auto& inc : d.increments) os << ' ' << to_double(inc.midpoint());
  os << "; last ratio " << rho << ", power decay " << d.power_decay << ", log decay " << d.log_decay
     << "; term ~ T^(" << to_string(d.analysis.exponent) << ") (log T)^(-" << to_string(d.analysis.log_exponent)
     << ") " << (d.analysis.converges ? "converges" : "diverges");
  if (d.analysis.boundary) os << " (boundary case, outside Delta > 1/a)";
  d.evidence = os.str();
  return d;
}

PackingScan packing_ratio_scan(long T_lo, long T_hi, const PackingInstance& inst, unsigned jobs) {
  const SeriesInstance& s = inst.series;
  if (T_lo < 1 || T_hi < T_lo) throw DomainError("packing_ratio_scan: bad T range");
  if (inst.certificate) {
    if (Rat(inst.certificate->height) < s.R * T_hi)
      throw PreconditionError("certificate height below R * max(T_range)");
    if (!(inst.certificate->rate == s.psi)) throw PreconditionError("certificate is for a different rate");
  }
  const long j0 = first_index(s);
  T_lo = std::max(T_lo, j0);
  if (T_lo > T_hi) return {};

  std::vector<std::uint64_t> zeta(static_cast<std::size_t>(T_hi - j0 + 1));
  parallel_for(zeta.size(), jobs, [&](std::size_t i) {
    zeta[i] = count_slab(SlabSpec::zeta(j0 + static_cast<long>(i), s.R, inst.a_span, s.phi));
  });

  PackingScan out;
  out.rows.resize(static_cast<std::size_t>(T_hi - T_lo + 1));
  parallel_for(out.rows.size(), jobs, [&](std::size_t i) {
    PackingRow& row = out.rows[i];
    row.T = T_lo + static_cast<long>(i);
    row.pi_count = count_slab(SlabSpec::pi(row.T, s.R, inst.a_span, s.phi));
    row.mu = mu_term(row.T, s.R, s.psi, s.a, s.b);
    if (inst.certificate) {
      try {
        row.nu = covering_count(CoveringInstance{inst.a_span, inst.certificate->subspace, s.psi, s.phi,
                                                 inst.certificate->gamma_lower(), s.R, row.T});
      } catch (const PreconditionError&) {
        row.nu.reset();
      }
    }
  });

  std::uint64_t cum = 0;
  for (long j = j0; j < T_lo; ++j) cum += zeta[static_cast<std::size_t>(j - j0)];
  for (auto& row : out.rows) {
    row.zeta = zeta[static_cast<std::size_t>(row.T - j0)];
    cum += row.zeta;
    row.cum_zeta = cum;
    HPInterval mu = to_interval(row.mu);
    row.ratio_int = HPInterval{Rat(row.pi_count) / mu.hi, Rat(row.pi_count) / mu.lo, mu.precision_bits};
    row.ratio_cumzeta = HPInterval{Rat(row.cum_zeta) / mu.hi, Rat(row.cum_zeta) / mu.lo, mu.precision_bits};
  }

  auto median = [](std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2;
  };
  const double cut = static_cast<double>(T_lo) + 0.75 * static_cast<double>(T_hi - T_lo);
  std::vector<double> all_int, top_int, all_cum, top_cum;
  for (const auto& row : out.rows) {
    const double ri = to_double(row.ratio_int.midpoint());
    const double rc = to_double(row.ratio_cumzeta.midpoint());
    all_int.push_back(ri);
    all_cum.push_back(rc);
    if (static_cast<double>(row.T) >= cut) {
      top_int.push_back(ri);
      top_cum.push_back(rc);
    }
  }
  out.median_int = median(all_int);
  out.top_quartile_median_int = median(top_int);
  out.median_cumzeta = median(all_cum);
  out.top_quartile_median_cumzeta = median(top_cum);
  out.red_flag_int = out.top_quartile_median_int > 2 * out.median_int;
  out.red_flag_cumzeta = out.top_quartile_median_cumzeta > 2 * out.median_cumzeta;
  return out;
}

}  // namespace badlab
