#include "badlab/rates.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>
#include <utility>

#include "rate_eval.hpp"

namespace badlab {

using detail::Bounds;

RateFunction RateFunction::power_law(Rat c, Rat alpha) {
  if (c <= 0) throw DomainError("rate constant c must be positive");
  if (alpha < 0) throw DomainError("rate exponent alpha must be non-negative");
  return RateFunction(RateKind::PowerLaw, std::move(c), std::move(alpha), Rat(0), Rat(1));
}

RateFunction RateFunction::power_log(Rat c, Rat alpha, Rat delta, Rat t0) {
  if (c <= 0) throw DomainError("rate constant c must be positive");
  if (alpha < 0) throw DomainError("rate exponent alpha must be non-negative");
  if (delta < 0) throw DomainError("log exponent delta must be non-negative");
  if (t0 < 2) throw DomainError("PowerLog domain start T0 must be at least 2");
  return RateFunction(RateKind::PowerLog, std::move(c), std::move(alpha), std::move(delta), std::move(t0));
}

RateFunction RateFunction::scaled(const Rat& k) const {
  if (k <= 0) throw DomainError("rate scale must be positive");
  RateFunction out = *this;
  out.c_ = c_ * k;
  return out;
}

std::string RateFunction::describe() const {
  std::ostringstream os;
  if (kind_ == RateKind::PowerLaw) {
    os << "powerlaw(c=" << to_string(c_) << ", alpha=" << to_string(alpha_) << ")";
  } else {
    os << "powerlog(c=" << to_string(c_) << ", alpha=" << to_string(alpha_) << ", delta=" << to_string(delta_)
       << ", T0=" << to_string(t0_) << ")";
  }
  return os.str();
}

namespace {

void require_domain(const RateFunction& f, const Rat& t) {
  if (!f.in_domain(t))
    throw DomainError("argument " + to_string(t) + " below domain start " + to_string(f.domain_start()) + " of " +
                      f.describe());
}

bool exact_root(Int& out, const Int& x, unsigned long k) {
  if (k == 1) {
    out = x;
    return true;
  }
  return mpz_root(out.get_mpz_t(), x.get_mpz_t(), k) != 0;
}

std::strong_ordering to_ordering(int c) {
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

// Writes h = root^k with k maximal, for rational h > 0.
std::pair<Rat, unsigned long> perfect_power(const Rat& h) {
  const Int& n = h.get_num();
  const Int& d = h.get_den();
  std::size_t bits = std::max(mpz_sizeinbase(n.get_mpz_t(), 2), mpz_sizeinbase(d.get_mpz_t(), 2));
  bool n_pp = n == 1 || mpz_perfect_power_p(n.get_mpz_t());
  bool d_pp = d == 1 || mpz_perfect_power_p(d.get_mpz_t());
  if (n_pp && d_pp) {
    for (unsigned long k = bits; k >= 2; --k) {
      Int rn, rd;
      if (exact_root(rn, n, k) && exact_root(rd, d, k)) return {make_rat(rn, rd), k};
    }
  }
  return {h, 1};
}

unsigned long lcm_ul(unsigned long a, unsigned long b) { return std::lcm(a, b); }

std::strong_ordering refine_compare(const std::function<HPInterval(unsigned)>& lhs,
                                    const std::function<HPInterval(unsigned)>& rhs, unsigned max_bits,
                                    const char* what) {
  unsigned bits = std::min(64u, max_bits);
  for (;;) {
    HPInterval a = lhs(bits);
    HPInterval b = rhs(bits);
    if (a.hi < b.lo) return std::strong_ordering::less;
    if (a.lo > b.hi) return std::strong_ordering::greater;
    if (a.is_point() && b.is_point() && a.lo == b.lo) return std::strong_ordering::equal;
    if (bits >= max_bits) break;
    bits = std::min(bits * 2, max_bits);
  }
  throw UndecidableError(std::string(what) + ": enclosures still overlap at " + std::to_string(max_bits) + " bits");
}

}  // namespace

namespace detail {

Bounds rate_bounds(const RateFunction& f, const Bounds& t) {
  Bounds v = pow_rat_pos(t, -f.alpha());
  if (f.delta() != 0) v = mul_pos(v, pow_rat_pos(log_gt1(t), -f.delta()));
  return scale_pos(v, f.c());
}

}  // namespace detail

std::optional<Rat> exact_value(const RateFunction& f, const Rat& t) {
  require_domain(f, t);
  if (f.delta() != 0) return std::nullopt;
  const Rat& a = f.alpha();
  if (a == 0) return f.c();
  unsigned long q = a.get_den().get_ui();
  long p = a.get_num().get_si();
  Int rn, rd;
  if (!exact_root(rn, t.get_num(), q) || !exact_root(rd, t.get_den(), q)) return std::nullopt;
  // t^(-p/q) = (rd / rn)^p
  return f.c() * pow_int(make_rat(rd, rn), p);
}

HPInterval interval_eval(const RateFunction& f, const Rat& t, unsigned bits) {
  if (auto v = exact_value(f, t)) return HPInterval::point(*v, bits);
  return detail::rate_bounds(f, Bounds::of(t, bits)).to_interval();
}

RateValue eval_at(const RateFunction& f, const Rat& t, unsigned bits) {
  if (auto v = exact_value(f, t)) return *v;
  return interval_eval(f, t, bits);
}

std::strong_ordering cmp_refine(const Rat& x, const RateFunction& f, const Rat& t, unsigned max_bits) {
  require_domain(f, t);
  if (x <= 0) return std::strong_ordering::less;
  if (f.delta() == 0) {
    // x <=> c * t^(-alpha)  iff  x / c <=> t^(-p/q)
    const Rat& a = f.alpha();
    return rat_cmp_power(x / f.c(), t, -a.get_num().get_si(), a.get_den().get_ui());
  }
  // A positive rational never equals c * t^(-alpha) * (log t)^(-delta) with
  // delta > 0, so refinement terminates unless the cap is too low.
  return refine_compare([&](unsigned) { return HPInterval::point(x); },
                        [&](unsigned bits) { return interval_eval(f, t, bits); }, max_bits, "cmp_refine");
}

HPInterval ratio_enclosure(const Rat& m, const Rat& h, const RateFunction& f, unsigned bits) {
  if (m == 0) return HPInterval::point(Rat(0), bits);
  if (auto v = exact_value(f, h)) return HPInterval::point(m / *v, bits);
  Bounds fb = detail::rate_bounds(f, Bounds::of(h, bits));
  return detail::div_pos(Bounds::of(m, bits), fb).to_interval();
}

std::strong_ordering cmp_rate_ratios(const Rat& m1, const Rat& h1, const Rat& m2, const Rat& h2,
                                     const RateFunction& f, unsigned max_bits) {
  require_domain(f, h1);
  require_domain(f, h2);
  if (m1 < 0 || m2 < 0) throw DomainError("cmp_rate_ratios requires non-negative numerators");
  if (m1 == 0 || m2 == 0) return to_ordering(cmp(m1, m2));
  if (h1 == h2) return to_ordering(cmp(m1, m2));

  const Rat& alpha = f.alpha();
  const Rat x = m1 / m2;
  // m1/f(h1) <=> m2/f(h2)  iff  m1/m2 <=> f(h1)/f(h2) = (h2/h1)^alpha * (log h2/log h1)^delta
  if (f.delta() == 0) {
    return rat_cmp_power(x, h2 / h1, alpha.get_num().get_si(), alpha.get_den().get_ui());
  }

  auto [r1, k1] = perfect_power(h1);
  auto [r2, k2] = perfect_power(h2);
  if (r1 == r2) {
    // log h2 / log h1 = k2 / k1, everything is algebraic: raise to a common
    // denominator and compare in rationals.
    const Rat& delta = f.delta();
    unsigned long l = lcm_ul(alpha.get_den().get_ui(), delta.get_den().get_ui());
    long ea = alpha.get_num().get_si() * static_cast<long>(l / alpha.get_den().get_ui());
    long ed = delta.get_num().get_si() * static_cast<long>(l / delta.get_den().get_ui());
    Rat lhs = pow_int(x, static_cast<long>(l));
    Rat rhs = pow_int(h2 / h1, ea) * pow_int(make_rat(Int(k2), Int(k1)), ed);
    return to_ordering(cmp(lhs, rhs));
  }
  return refine_compare([&](unsigned bits) { return ratio_enclosure(m1, h1, f, bits); },
                        [&](unsigned bits) { return ratio_enclosure(m2, h2, f, bits); }, max_bits,
                        "cmp_rate_ratios");
}

// ---------------------------------------------------------------------------
// Admissibility

namespace {

// phi(t) <=> psi(t); exact whenever the two can coincide.
std::strong_ordering cmp_rates_at(const RateFunction& phi, const RateFunction& psi, const Rat& t, unsigned max_bits) {
  auto a = exact_value(phi, t);
  auto b = exact_value(psi, t);
  if (a && b) return to_ordering(cmp(*a, *b));
  if (phi.delta() == psi.delta()) {
    // Log factors cancel: c_phi/c_psi * t^(alpha_psi - alpha_phi) <=> 1.
    Rat k = phi.c() / psi.c();
    Rat e = psi.alpha() - phi.alpha();
    // k * t^e <=> 1  iff  1/k <=> t^e
    auto ord = rat_cmp_power(1 / k, t, e.get_num().get_si(), e.get_den().get_ui());
    if (ord == std::strong_ordering::less) return std::strong_ordering::greater;
    if (ord == std::strong_ordering::greater) return std::strong_ordering::less;
    return std::strong_ordering::equal;
  }
  return refine_compare([&](unsigned bits) { return interval_eval(phi, t, bits); },
                        [&](unsigned bits) { return interval_eval(psi, t, bits); }, max_bits, "admissible_pair");
}

// Bounds of C * e^(-k) * (k / da)^k, the interior maximum of phi/psi.
bool interior_max_at_most_one(const Rat& c, const Rat& k, const Rat& da, unsigned max_bits) {
  unsigned bits = std::min(64u, max_bits);
  for (;;) {
    Bounds e = detail::exp_of(detail::scale_pos(Bounds::of(k, bits), Rat(1)));
    Bounds neg_exp(bits);
    mpfr_ui_div(neg_exp.lo.get(), 1, e.hi.get(), MPFR_RNDD);
    mpfr_ui_div(neg_exp.hi.get(), 1, e.lo.get(), MPFR_RNDU);
    Bounds power = detail::pow_rat_pos(Bounds::of(k / da, bits), k);
    HPInterval v = detail::scale_pos(detail::mul_pos(neg_exp, power), c).to_interval();
    if (v.hi <= 1) return true;
    if (v.lo > 1) return false;
    if (bits >= max_bits) throw UndecidableError("admissible_pair: interior maximum undecided");
    bits = std::min(bits * 2, max_bits);
  }
}

}  // namespace

Admissibility admissible_pair(const RateFunction& psi, const RateFunction& phi, const Rat& t_max) {
  const unsigned max_bits = max_precision_bits();
  const Rat start = std::max(psi.domain_start(), phi.domain_start());
  Admissibility out;

  // Grid: geometric with ratio 2 from the common domain start, plus t_max.
  auto violates = [&](const Rat& t) { return cmp_rates_at(phi, psi, t, max_bits) == std::strong_ordering::greater; };
  for (Rat t = start; t <= t_max; t *= 2) {
    if (violates(t)) {
      out.witness = t;
      break;
    }
  }
  if (!out.witness && t_max >= start && violates(t_max)) out.witness = t_max;

  const Rat da = phi.alpha() - psi.alpha();
  const Rat dd = phi.delta() - psi.delta();
  const Rat c = phi.c() / psi.c();
  bool global = false;
  std::string reason;
  if (da >= 0 && dd >= 0) {
    // phi/psi is non-increasing; it suffices to check the domain start.
    global = !violates(start);
    reason = "phi/psi non-increasing, decided at T=" + to_string(start);
  } else if (da > 0) {
    // phi/psi = c T^(-da) (log T)^k with k > 0 peaks at log T = k / da.
    Rat k = -dd;
    Rat u_star = k / da;
    Bounds log_start = detail::log_gt1(Bounds::of(start, 128));
    HPInterval ls = log_start.to_interval();
    if (ls.lo >= u_star) {
      global = !violates(start);
      reason = "phi/psi decreasing beyond its interior peak, decided at T=" + to_string(start);
    } else {
      global = interior_max_at_most_one(c, k, da, max_bits);
      reason = "phi/psi bounded by its interior maximum c*e^-k*(k/da)^k";
    }
  } else {
    reason = "phi/psi grows without bound";
  }

  if (!global && !out.witness) {
    // A violation exists somewhere; search further out by doubling.
    Rat t = start;
    for (int i = 0; i < 4096 && !out.witness; ++i, t *= 2)
      if (t > t_max && violates(t)) out.witness = t;
  }
  out.ok = global && !out.witness;
  out.detail = out.ok ? "phi <= psi on [" + to_string(start) + ", inf): " + reason
                      : "phi > psi" + (out.witness ? " at T=" + to_string(*out.witness) : std::string(" eventually")) +
                            " (" + reason + ")";
  return out;
}

// ---------------------------------------------------------------------------
// Threshold

Threshold Threshold::exact(Rat value) {
  Threshold t;
  t.scale_ = std::move(value);
  t.lower_ = t.scale_;
  t.upper_ = t.scale_;
  return t;
}

Threshold Threshold::of_rate(Rat scale, RateFunction f, Rat at, std::optional<Rat> divisor_at) {
  if (scale < 0) throw DomainError("threshold scale must be non-negative");
  require_domain(f, at);
  if (divisor_at) require_domain(f, *divisor_at);
  Threshold t;
  t.scale_ = std::move(scale);
  t.rate_ = std::move(f);
  t.at_ = std::move(at);
  t.divisor_at_ = std::move(divisor_at);
  t.init_bounds();
  return t;
}

HPInterval Threshold::enclosure(unsigned bits) const {
  if (!rate_ || scale_ == 0) return HPInterval::point(scale_, bits);
  HPInterval num = interval_eval(*rate_, at_, bits);
  if (!divisor_at_) {
    if (num.is_point()) return HPInterval::point(scale_ * num.lo, bits);
    return HPInterval{scale_ * num.lo, scale_ * num.hi, bits};
  }
  HPInterval den = interval_eval(*rate_, *divisor_at_, bits);
  if (num.is_point() && den.is_point()) return HPInterval::point(scale_ * num.lo / den.lo, bits);
  return HPInterval{scale_ * num.lo / den.hi, scale_ * num.hi / den.lo, bits};
}

void Threshold::init_bounds() {
  HPInterval e = enclosure(128);
  lower_ = e.lo;
  upper_ = e.hi;
}

std::strong_ordering Threshold::compare(const Rat& x) const {
  if (x < lower_) return std::strong_ordering::less;
  if (x > upper_) return std::strong_ordering::greater;
  if (is_exact()) return std::strong_ordering::equal;
  if (!divisor_at_) return cmp_refine(x / scale_, *rate_, at_);
  if (x <= 0) return std::strong_ordering::less;
  return cmp_rate_ratios(x / scale_, at_, Rat(1), *divisor_at_, *rate_);
}

Threshold Threshold::scaled(const Rat& k) const {
  if (k < 0) throw DomainError("threshold scale must be non-negative");
  Threshold t = *this;
  t.scale_ *= k;
  t.lower_ *= k;
  t.upper_ *= k;
  return t;
}

std::string Threshold::describe() const {
  if (!rate_) return to_string(scale_);
  std::string s = to_string(scale_) + "*" + rate_->describe() + "(" + to_string(at_) + ")";
  if (divisor_at_) s += "/f(" + to_string(*divisor_at_) + ")";
  return s;
}

}  // namespace badlab
