#pragma once

// Height-limited badness constants.
//
//   subspace:  inf over integer x != 0 of dist(x, B-span) / psi(|x|)
//   vector:    min over q <= X of max_j ||q w_j|| / psi(q)
//
// A ratio m / psi(h) is kept symbolically as the pair (m, h); it is rational
// only when psi(h) is, so comparisons go through cmp_rate_ratios.

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "badlab/geometry.hpp"
#include "badlab/lattice.hpp"
#include "badlab/rates.hpp"

namespace badlab {

/// numerator / f(height).
struct RateRatio {
  Rat numerator;
  Rat height;

  HPInterval enclosure(const RateFunction& f, unsigned bits = 128) const;
  std::optional<Rat> exact(const RateFunction& f) const;
  /// this <=> other, exactly.
  std::strong_ordering compare(const RateRatio& other, const RateFunction& f) const;
  /// this <=> g for a rational g.
  std::strong_ordering compare(const Rat& g, const RateFunction& f) const;
};

struct BadnessCertificate {
  LiftedSpan subspace;
  RateFunction rate;
  /// Every integer x != 0 with |x| <= height (and in the rate's domain)
  /// satisfies dist(x, subspace) >= gamma * rate(|x|).
  long height = 0;
  RateRatio gamma;  // = dist(witness) / rate(|witness|)
  LatticePoint witness;

  HPInterval gamma_enclosure(unsigned bits = 128) const { return gamma.enclosure(rate, bits); }
  std::optional<Rat> gamma_exact() const { return gamma.exact(rate); }
  /// Largest rational below gamma at the given precision (exact gamma when
  /// it is rational).
  Rat gamma_lower(unsigned bits = 128) const;
};

struct ZeroHit {
  LatticePoint witness;  // a nonzero integer point on the subspace
};

using SubspaceBadness = std::variant<BadnessCertificate, ZeroHit>;

/// Shell-by-shell scan of 0 < |x| <= H. on_shell receives the certificate
/// valid at each completed height.
SubspaceBadness subspace_badness(const LiftedSpan& b_span, const RateFunction& psi, long H,
                                 const std::function<void(const BadnessCertificate&)>& on_shell = {},
                                 unsigned jobs = 1);

/// Omega-triviality with gamma taken against a certificate: requires
/// gamma <= certificate gamma and height >= R T.
OmegaCheck verify_omega_trivial(const BadnessCertificate& cert, const Rat& gamma, const Rat& R, long T);

struct VectorBadness {
  RateRatio gamma;  // max_j ||q w_j|| / psi(q) at q = argmin
  long argmin_q = 0;
  bool zero() const { return gamma.numerator == 0; }
};

/// Precomputed rigorous double bounds on 1/psi(q) for q <= X. Scans use them
/// to discard candidates and fall back to exact comparison only when the
/// bounds overlap.
class BadnessScanner {
 public:
  BadnessScanner(const RateFunction& psi, long X);

  const RateFunction& rate() const { return psi_; }
  long max_q() const { return X_; }

  /// Minimum over max(q_min, domain start) <= q <= X; ties go to the
  /// smallest q.
  VectorBadness scan(const RatVec& w, long q_min = 1) const;

 private:
  RateFunction psi_;
  long X_;
  long q0_;
  std::vector<double> inv_lo_;
  std::vector<double> inv_hi_;
};

VectorBadness vector_badness(const RatVec& w, const RateFunction& psi, long X, long q_min = 1);

struct LineDistanceRow {
  long x0 = 0;
  Rat M;  // max_j ||w_j x0||
  Rat D;  // min over t of |x - t (1, w)|_inf
};

struct LineDistanceAudit {
  bool sandwich_holds = true;
  std::optional<long> violation_x0;
  /// Extremes of D / M over rows with M > 0.
  std::optional<Rat> min_ratio;
  std::optional<Rat> max_ratio;
  /// Lower end of the sandwich, 1 / (1 + |w|).
  Rat lower_factor;
  /// Row minimising D / psi(x0).
  std::optional<RateRatio> min_badness;
  long min_badness_x0 = 0;
  std::vector<LineDistanceRow> rows;
};

LineDistanceAudit line_distance_audit(const RatVec& w, const RateFunction& psi, long X);

}  // namespace badlab
