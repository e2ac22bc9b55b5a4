#pragma once

// The closed family of decreasing rate functions
//
//   PowerLaw:  f(T) = c * T^(-alpha)                     for T >= 1
//   PowerLog:  f(T) = c * T^(-alpha) * (log T)^(-delta)  for T >= T0 >= 2
//
// with rational c > 0, alpha >= 0, delta >= 0. Values are exact rationals
// whenever the power is rational; otherwise they are enclosed by directed
// rounding and every comparison refines until it is decided.

#include <compare>
#include <optional>
#include <string>
#include <variant>

#include "badlab/exactnum.hpp"

namespace badlab {

enum class RateKind { PowerLaw, PowerLog };

class RateFunction {
 public:
  static RateFunction power_law(Rat c, Rat alpha);
  static RateFunction power_log(Rat c, Rat alpha, Rat delta, Rat t0 = Rat(2));

  RateKind kind() const { return kind_; }
  const Rat& c() const { return c_; }
  const Rat& alpha() const { return alpha_; }
  /// Zero for PowerLaw.
  const Rat& delta() const { return delta_; }
  /// First admissible argument: 1 for PowerLaw, T0 for PowerLog.
  const Rat& domain_start() const { return t0_; }

  bool in_domain(const Rat& t) const { return t >= t0_; }
  bool tends_to_zero() const { return alpha_ > 0 || delta_ > 0; }

  /// k * f for k > 0.
  RateFunction scaled(const Rat& k) const;

  std::string describe() const;

  bool operator==(const RateFunction&) const = default;

 private:
  RateFunction(RateKind kind, Rat c, Rat alpha, Rat delta, Rat t0)
      : kind_(kind), c_(std::move(c)), alpha_(std::move(alpha)), delta_(std::move(delta)), t0_(std::move(t0)) {}

  RateKind kind_;
  Rat c_;
  Rat alpha_;
  Rat delta_;
  Rat t0_;
};

using RateValue = std::variant<Rat, HPInterval>;

/// f(T) when it is rational (no log factor and T^alpha rational).
std::optional<Rat> exact_value(const RateFunction& f, const Rat& t);

/// Enclosure of f(T) at `bits` bits; width zero when the value is rational.
HPInterval interval_eval(const RateFunction& f, const Rat& t, unsigned bits);

/// Exact value when rational, otherwise an enclosure at `bits` bits.
RateValue eval_at(const RateFunction& f, const Rat& t, unsigned bits = 128);

/// x <=> f(T). Exact for rational-valued f; otherwise refines up to max_bits.
std::strong_ordering cmp_refine(const Rat& x, const RateFunction& f, const Rat& t,
                                unsigned max_bits = max_precision_bits());

/// m1 / f(h1) <=> m2 / f(h2) for m1, m2 >= 0. Decided exactly whenever the
/// two sides could be equal (rational powers, commensurable logarithms).
std::strong_ordering cmp_rate_ratios(const Rat& m1, const Rat& h1, const Rat& m2, const Rat& h2,
                                     const RateFunction& f, unsigned max_bits = max_precision_bits());

/// Enclosure of m / f(h).
HPInterval ratio_enclosure(const Rat& m, const Rat& h, const RateFunction& f, unsigned bits);

struct Admissibility {
  /// phi(T) <= psi(T) holds on the common domain.
  bool ok = false;
  /// First grid point with phi(T) > psi(T), when one was found.
  std::optional<Rat> witness;
  std::string detail;
};

/// Checks phi <= psi on the common domain: analytically for the family, and
/// on a geometric grid up to t_max.
Admissibility admissible_pair(const RateFunction& psi, const RateFunction& phi, const Rat& t_max);

/// Threshold value  scale * f(at) [/ f(divisor_at)], or a plain rational.
/// Holds a cached enclosure; compare() is always exact or refined.
class Threshold {
 public:
  static Threshold exact(Rat value);
  static Threshold of_rate(Rat scale, RateFunction f, Rat at, std::optional<Rat> divisor_at = std::nullopt);

  bool is_exact() const { return lower_ == upper_; }
  const Rat& lower() const { return lower_; }
  const Rat& upper() const { return upper_; }

  /// x <=> threshold.
  std::strong_ordering compare(const Rat& x) const;
  bool admits(const Rat& x) const { return compare(x) <= 0; }

  Threshold scaled(const Rat& k) const;
  HPInterval enclosure(unsigned bits) const;
  std::string describe() const;

 private:
  Threshold() = default;
  void init_bounds();

  Rat scale_{1};
  std::optional<RateFunction> rate_;
  Rat at_{1};
  std::optional<Rat> divisor_at_;
  Rat lower_;
  Rat upper_;
};

}  // namespace badlab
