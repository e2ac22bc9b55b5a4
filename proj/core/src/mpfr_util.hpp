#pragma once

// Private RAII layer over MPFR with directed-rounding interval helpers.

#include <mpfr.h>

#include <utility>

#include "badlab/exactnum.hpp"

namespace badlab::detail {

class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t bits) { mpfr_init2(v_, bits); }
  Mpfr(const Mpfr& other) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  Mpfr(Mpfr&& other) noexcept {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_swap(v_, other.v_);
  }
  Mpfr& operator=(Mpfr other) noexcept {
    mpfr_swap(v_, other.v_);
    return *this;
  }
  ~Mpfr() { mpfr_clear(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }

 private:
  mpfr_t v_;
};

/// Exact conversion of a finite MPFR value to a dyadic rational.
Rat to_rat(const Mpfr& x);

/// Rounds a rational in the requested direction.
void set_rat(Mpfr& out, const Rat& x, mpfr_rnd_t rnd);

/// Directed-rounding enclosure [lo, hi] at a fixed precision.
struct Bounds {
  Mpfr lo;
  Mpfr hi;

  explicit Bounds(mpfr_prec_t bits) : lo(bits), hi(bits) {}

  static Bounds of(const Rat& x, mpfr_prec_t bits);
  static Bounds of_ui(unsigned long x, mpfr_prec_t bits);

  mpfr_prec_t precision() const { return lo.precision(); }
  HPInterval to_interval() const;
};

// All operands of the multiplicative helpers must be positive.
Bounds add(const Bounds& a, const Bounds& b);
Bounds sub(const Bounds& a, const Bounds& b);
Bounds mul_pos(const Bounds& a, const Bounds& b);
Bounds div_pos(const Bounds& a, const Bounds& b);
Bounds scale_pos(const Bounds& a, const Rat& k);
/// x^(p/q) for x > 0; p may be negative.
Bounds pow_rat_pos(const Bounds& x, const Rat& exponent);
/// log(x) for x > 1.
Bounds log_gt1(const Bounds& x);
Bounds exp_of(const Bounds& x);

}  // namespace badlab::detail
