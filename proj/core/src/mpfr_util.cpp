#include "mpfr_util.hpp"

namespace badlab::detail {

Rat to_rat(const Mpfr& x) {
  if (!mpfr_number_p(x.get())) throw Error("non-finite MPFR value");
  if (mpfr_zero_p(x.get())) return Rat(0);
  Int m;
  mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x.get());
  Rat r(m);
  if (e >= 0) {
    mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
  } else {
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
  }
  return r;
}

void set_rat(Mpfr& out, const Rat& x, mpfr_rnd_t rnd) { mpfr_set_q(out.get(), x.get_mpq_t(), rnd); }

Bounds Bounds::of(const Rat& x, mpfr_prec_t bits) {
  Bounds b(bits);
  set_rat(b.lo, x, MPFR_RNDD);
  set_rat(b.hi, x, MPFR_RNDU);
  return b;
}

Bounds Bounds::of_ui(unsigned long x, mpfr_prec_t bits) {
  Bounds b(bits);
  mpfr_set_ui(b.lo.get(), x, MPFR_RNDD);
  mpfr_set_ui(b.hi.get(), x, MPFR_RNDU);
  return b;
}

HPInterval Bounds::to_interval() const {
  return HPInterval{to_rat(lo), to_rat(hi), static_cast<unsigned>(precision())};
}

Bounds add(const Bounds& a, const Bounds& b) {
  Bounds r(a.precision());
  mpfr_add(r.lo.get(), a.lo.get(), b.lo.get(), MPFR_RNDD);
  mpfr_add(r.hi.get(), a.hi.get(), b.hi.get(), MPFR_RNDU);
  return r;
}

Bounds sub(const Bounds& a, const Bounds& b) {
  Bounds r(a.precision());
  mpfr_sub(r.lo.get(), a.lo.get(), b.hi.get(), MPFR_RNDD);
  mpfr_sub(r.hi.get(), a.hi.get(), b.lo.get(), MPFR_RNDU);
  return r;
}

Bounds mul_pos(const Bounds& a, const Bounds& b) {
  Bounds r(a.precision());
  mpfr_mul(r.lo.get(), a.lo.get(), b.lo.get(), MPFR_RNDD);
  mpfr_mul(r.hi.get(), a.hi.get(), b.hi.get(), MPFR_RNDU);
  return r;
}

Bounds div_pos(const Bounds& a, const Bounds& b) {
  Bounds r(a.precision());
  mpfr_div(r.lo.get(), a.lo.get(), b.hi.get(), MPFR_RNDD);
  mpfr_div(r.hi.get(), a.hi.get(), b.lo.get(), MPFR_RNDU);
  return r;
}

Bounds scale_pos(const Bounds& a, const Rat& k) {
  Bounds r(a.precision());
  mpfr_mul_q(r.lo.get(), a.lo.get(), k.get_mpq_t(), MPFR_RNDD);
  mpfr_mul_q(r.hi.get(), a.hi.get(), k.get_mpq_t(), MPFR_RNDU);
  return r;
}

namespace {

// x^(p/q) for p, q > 0 on one endpoint with rounding direction rnd.
void pow_frac(Mpfr& out, const Mpfr& x, unsigned long p, unsigned long q, mpfr_rnd_t rnd) {
  mpfr_pow_ui(out.get(), x.get(), p, rnd);
  if (q != 1) mpfr_rootn_ui(out.get(), out.get(), q, rnd);
}

}  // namespace

Bounds pow_rat_pos(const Bounds& x, const Rat& exponent) {
  if (exponent == 0) return Bounds::of_ui(1, x.precision());
  unsigned long q = exponent.get_den().get_ui();
  Int pn = abs(exponent.get_num());
  if (!exponent.get_den().fits_ulong_p() || !pn.fits_ulong_p()) throw DomainError("exponent too large");
  unsigned long p = pn.get_ui();
  Bounds y(x.precision());
  pow_frac(y.lo, x.lo, p, q, MPFR_RNDD);
  pow_frac(y.hi, x.hi, p, q, MPFR_RNDU);
  if (exponent > 0) return y;
  Bounds r(x.precision());
  mpfr_ui_div(r.lo.get(), 1, y.hi.get(), MPFR_RNDD);
  mpfr_ui_div(r.hi.get(), 1, y.lo.get(), MPFR_RNDU);
  return r;
}

Bounds log_gt1(const Bounds& x) {
  Bounds r(x.precision());
  mpfr_log(r.lo.get(), x.lo.get(), MPFR_RNDD);
  mpfr_log(r.hi.get(), x.hi.get(), MPFR_RNDU);
  return r;
}

Bounds exp_of(const Bounds& x) {
  Bounds r(x.precision());
  mpfr_exp(r.lo.get(), x.lo.get(), MPFR_RNDD);
  mpfr_exp(r.hi.get(), x.hi.get(), MPFR_RNDU);
  return r;
}

}  // namespace badlab::detail
