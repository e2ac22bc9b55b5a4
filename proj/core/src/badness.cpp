#include "badlab/badness.hpp"

#include <algorithm>
#include <cmath>

#include "rate_eval.hpp"

namespace badlab {

// ---------------------------------------------------------------------------
// RateRatio

HPInterval RateRatio::enclosure(const RateFunction& f, unsigned bits) const {
  return ratio_enclosure(numerator, height, f, bits);
}

std::optional<Rat> RateRatio::exact(const RateFunction& f) const {
  if (numerator == 0) return Rat(0);
  if (auto v = exact_value(f, height)) return numerator / *v;
  return std::nullopt;
}

std::strong_ordering RateRatio::compare(const RateRatio& other, const RateFunction& f) const {
  return cmp_rate_ratios(numerator, height, other.numerator, other.height, f);
}

std::strong_ordering RateRatio::compare(const Rat& g, const RateFunction& f) const {
  if (g <= 0 || numerator == 0) {
    int c = cmp(numerator == 0 ? Rat(0) : Rat(1), g);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }
  // numerator / f(h) <=> g  iff  numerator / g <=> f(h)
  return cmp_refine(numerator / g, f, height);
}

Rat BadnessCertificate::gamma_lower(unsigned bits) const {
  if (auto g = gamma_exact()) return *g;
  return gamma_enclosure(bits).lo;
}

// ---------------------------------------------------------------------------
// Subspace badness

namespace {

bool canonical_sign(const LatticePoint& z) {
  for (long v : z)
    if (v != 0) return v > 0;
  return false;
}

}  // namespace

SubspaceBadness subspace_badness(const LiftedSpan& b_span, const RateFunction& psi, long H,
                                 const std::function<void(const BadnessCertificate&)>& on_shell, unsigned jobs) {
  if (H < 1) throw DomainError("subspace_badness: H must be at least 1");
  const std::size_t n = b_span.ambient_dim();
  const long start = std::max(1L, ceil_int(psi.domain_start()).get_si());
  if (H < start) throw DomainError("subspace_badness: H below the rate's domain start");

  std::optional<RateRatio> best;
  LatticePoint witness;
  for (long h = 1; h <= H; ++h) {
    if (h < start) {
      // Outside the rate's domain only exact hits on the subspace matter.
      Region r{std::vector<long>(n, -h), std::vector<long>(n, h), {}, b_span, Threshold::exact(Rat(0))};
      r.lo[0] = 0;
      for (const auto& z : enumerate_region(r, jobs))
        if (sup_norm(z) == h && canonical_sign(z)) return ZeroHit{z};
      continue;
    }
    Threshold thr = best ? Threshold::of_rate(best->numerator, psi, Rat(h), best->height) : Threshold::exact(Rat(h));
    Region r{std::vector<long>(n, -h), std::vector<long>(n, h), {}, b_span, thr};
    r.lo[0] = 0;
    for (const auto& z : enumerate_region(r, jobs)) {
      if (sup_norm(z) != h || !canonical_sign(z)) continue;
      Rat d = b_span.forms().distance(z);
      if (d == 0) return ZeroHit{z};
      RateRatio cand{d, Rat(h)};
      if (!best || cand.compare(*best, psi) < 0) {
        best = cand;
        witness = z;
      }
    }
    if (on_shell && best) on_shell(BadnessCertificate{b_span, psi, h, *best, witness});
  }
  return BadnessCertificate{b_span, psi, H, *best, witness};
}

OmegaCheck verify_omega_trivial(const BadnessCertificate& cert, const Rat& gamma, const Rat& R, long T) {
  if (Rat(cert.height) < R * T)
    throw PreconditionError("certificate height " + std::to_string(cert.height) + " is below R*T = " +
                            to_string(R * T));
  if (cert.gamma.compare(gamma, cert.rate) < 0)
    throw PreconditionError("gamma " + to_string(gamma) + " exceeds the certified constant");
  return verify_omega_trivial(cert.subspace, gamma, cert.rate, R, T);
}

// ---------------------------------------------------------------------------
// Vector badness

namespace {

// Relative slack covering the conversion of the numerator to double (one
// truncation) and two rounded products.
constexpr double kSlack = 1e-14;
constexpr std::size_t kMaxFilterBits = 1000;

}  // namespace

BadnessScanner::BadnessScanner(const RateFunction& psi, long X) : psi_(psi), X_(X) {
  if (X < 1) throw DomainError("vector_badness: X must be at least 1");
  q0_ = std::max(1L, ceil_int(psi.domain_start()).get_si());
  if (X < q0_) return;
  const std::size_t count = static_cast<std::size_t>(X - q0_ + 1);
  inv_lo_.resize(count);
  inv_hi_.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto b = detail::rate_bounds(psi, detail::Bounds::of_ui(static_cast<unsigned long>(q0_) + i, 53));
    inv_lo_[i] = 1.0 / mpfr_get_d(b.hi.get(), MPFR_RNDU);
    inv_hi_[i] = 1.0 / mpfr_get_d(b.lo.get(), MPFR_RNDD);
    // The divisions round to nearest; widen by one ulp on each side.
    inv_lo_[i] = std::nextafter(inv_lo_[i], 0.0);
    inv_hi_[i] = std::nextafter(inv_hi_[i], HUGE_VAL);
  }
}

VectorBadness BadnessScanner::scan(const RatVec& w, long q_min) const {
  const long q_start = std::max(q_min, q0_);
  if (q_start > X_) throw DomainError("vector_badness: empty range of q");
  if (w.empty()) throw DomainError("vector_badness: empty vector");

  Int D(1);
  for (const auto& v : w) mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), v.get_den().get_mpz_t());
  std::vector<Int> step(w.size()), r(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    Int num = w[j].get_num() * (D / w[j].get_den());
    mpz_fdiv_r(step[j].get_mpz_t(), num.get_mpz_t(), D.get_mpz_t());
    r[j] = step[j] * q_start;
    mpz_fdiv_r(r[j].get_mpz_t(), r[j].get_mpz_t(), D.get_mpz_t());
  }
  const bool filter = mpz_sizeinbase(D.get_mpz_t(), 2) < kMaxFilterBits;

  Int m, best_m, tmp;
  long best_q = 0;
  double best_lo = 0, best_hi = 0;
  for (long q = q_start; q <= X_; ++q) {
    m = 0;
    for (std::size_t j = 0; j < w.size(); ++j) {
      tmp = D - r[j];
      const Int& d = r[j] < tmp ? r[j] : tmp;
      if (d > m) m = d;
    }
    if (m == 0) return VectorBadness{RateRatio{Rat(0), Rat(q)}, q};

    const std::size_t idx = static_cast<std::size_t>(q - q0_);
    bool take = false;
    double lo = 0, hi = 0;
    if (filter) {
      const double md = m.get_d();  // truncates toward zero
      lo = md * inv_lo_[idx] * (1 - kSlack);
      hi = md * inv_hi_[idx] * (1 + kSlack);
    }
    if (best_q == 0) {
      take = true;
    } else if (filter && hi < best_lo) {
      take = true;
    } else if (filter && lo > best_hi) {
      take = false;
    } else {
      take = cmp_rate_ratios(Rat(m), Rat(q), Rat(best_m), Rat(best_q), psi_) < 0;
    }
    if (take) {
      best_m = m;
      best_q = q;
      best_lo = lo;
      best_hi = hi;
    }
    for (std::size_t j = 0; j < w.size(); ++j) {
      r[j] += step[j];
      if (r[j] >= D) r[j] -= D;
    }
  }
  return VectorBadness{RateRatio{make_rat(best_m, D), Rat(best_q)}, best_q};
}

VectorBadness vector_badness(const RatVec& w, const RateFunction& psi, long X, long q_min) {
  return BadnessScanner(psi, X).scan(w, q_min);
}

// ---------------------------------------------------------------------------
// Audit of the equivalence with the simultaneous-approximation condition

LineDistanceAudit line_distance_audit(const RatVec& w, const RateFunction& psi, long X) {
  if (X < 1) throw DomainError("line_distance_audit: X must be at least 1");
  LineDistanceAudit out;
  out.lower_factor = 1 / (1 + sup_norm(w));
  RatVec wstar(w.size() + 1);
  wstar[0] = 1;
  std::copy(w.begin(), w.end(), wstar.begin() + 1);
  for (long x0 = 1; x0 <= X; ++x0) {
    RatVec x(w.size() + 1);
    x[0] = x0;
    LineDistanceRow row;
    row.x0 = x0;
    row.M = 0;
    for (std::size_t j = 0; j < w.size(); ++j) {
      const Rat target = w[j] * x0;
      x[j + 1] = Rat(nearest_int(target));
      Rat e = abs(x[j + 1] - target);
      if (e > row.M) row.M = e;
    }
    row.D = line_minimax(x, wstar).distance;
    if (!(row.M * out.lower_factor <= row.D && row.D <= row.M)) {
      if (out.sandwich_holds) out.violation_x0 = x0;
      out.sandwich_holds = false;
    }
    if (row.M > 0) {
      Rat ratio = row.D / row.M;
      if (!out.min_ratio || ratio < *out.min_ratio) out.min_ratio = ratio;
      if (!out.max_ratio || ratio > *out.max_ratio) out.max_ratio = ratio;
    }
    if (psi.in_domain(Rat(x0))) {
      RateRatio b{row.D, Rat(x0)};
      if (!out.min_badness || b.compare(*out.min_badness, psi) < 0) {
        out.min_badness = b;
        out.min_badness_x0 = x0;
      }
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace badlab
