#pragma once

// Integer points of the slab sets
//
//   Pi_T    = { z : 0 <= z_0 <= T, |z_j| <= RT, dist(z, A-span) <= phi(RT) }
//   Omega_T = { z : 0 <= z_0 <= T, |z_j| <= RT, dist(z, B-span) <= gamma psi(RT) }
//   Z_T     = the layer z_0 = T of Pi_T
//
// and the packing / covering constructions built on them.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "badlab/geometry.hpp"
#include "badlab/rates.hpp"

namespace badlab {

/// Integer box lo <= z <= hi (per coordinate) intersected with
/// { z : dist(z - offset, target) <= thickness }.
struct Region {
  std::vector<long> lo;
  std::vector<long> hi;
  RatVec offset;  // empty means the origin
  LiftedSpan target;
  Threshold thickness;
};

/// Number of box points; the enumerators reject boxes above 10^9.
long double box_size(const Region& r);

std::vector<LatticePoint> enumerate_region(const Region& r, unsigned jobs = 1);
std::uint64_t count_region(const Region& r, unsigned jobs = 1);
/// Sequential lexicographic walk; stops when fn returns false.
void for_each_in_region(const Region& r, const std::function<bool(const LatticePoint&)>& fn);

struct SlabSpec {
  long T = 1;
  Rat R{1};
  LiftedSpan target;
  Threshold thickness;
  long z0_lo = 0;
  long z0_hi = 0;

  /// Pi_T: target A-span, thickness phi(RT), z_0 in [0, T].
  static SlabSpec pi(long T, const Rat& R, const LiftedSpan& a_span, const RateFunction& phi);
  /// Omega_T: target B-span, thickness gamma psi(RT), z_0 in [0, T].
  static SlabSpec omega(long T, const Rat& R, const LiftedSpan& b_span, const Rat& gamma, const RateFunction& psi);
  /// Z_T: target A-span, thickness phi(RT), z_0 = T.
  static SlabSpec zeta(long T, const Rat& R, const LiftedSpan& a_span, const RateFunction& phi);

  Region region() const;
};

std::vector<LatticePoint> enumerate_slab(const SlabSpec& spec, unsigned jobs = 1);
std::uint64_t count_slab(const SlabSpec& spec, unsigned jobs = 1);

struct ZetaLayer {
  std::uint64_t count = 0;
  std::vector<LatticePoint> points;
};

ZetaLayer zeta_layer(long T, const Rat& R, const LiftedSpan& a_span, const RateFunction& phi, unsigned jobs = 1);

// ---------------------------------------------------------------------------
// Omega-triviality and the packing lemma

struct OmegaSpec {
  LiftedSpan b_span;
  Rat gamma;
  RateFunction psi;
  Rat R;
  long T = 1;
};

struct OmegaCheck {
  bool ok = false;
  std::optional<LatticePoint> counterexample;
};

OmegaCheck verify_omega_trivial(const LiftedSpan& b_span, const Rat& gamma, const RateFunction& psi, const Rat& R,
                                long T);
inline OmegaCheck verify_omega_trivial(const OmegaSpec& s) {
  return verify_omega_trivial(s.b_span, s.gamma, s.psi, s.R, s.T);
}

/// v in Omega_T, for a rational point v.
bool in_omega(const OmegaSpec& s, std::span<const Rat> v);

/// Region of the translate (1/2) Omega_T + c.
Region half_translate_region(const OmegaSpec& s, const RatVec& c);

struct HalfDilationReport {
  bool ok = true;
  std::size_t translates = 0;
  std::size_t max_members = 0;
  std::size_t pairs_checked = 0;
  /// Pairs x != y in one translate with neither x - y nor y - x in Omega_T.
  std::size_t difference_failures = 0;
  std::optional<RatVec> violating_translate;
  std::optional<std::pair<LatticePoint, LatticePoint>> violating_pair;
  std::string certificate;
};

/// Asserts that every translate holds at most one integer point. With
/// require_trivial the Omega-triviality precondition is verified first and a
/// failure throws PreconditionError.
HalfDilationReport half_dilation_check(const OmegaSpec& s, const std::vector<RatVec>& translates,
                                       bool require_trivial = true);

/// Deterministic translates: half are shifted so that a chosen lattice point
/// is guaranteed to lie inside, half are uniform dyadic points of the box.
std::vector<RatVec> random_translates(const OmegaSpec& s, std::size_t count, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Covering Pi_T by translates of (1/2) Omega_T

struct CoveringInstance {
  LiftedSpan a_span;
  LiftedSpan b_span;
  RateFunction psi;
  RateFunction phi;
  Rat gamma;
  Rat R;
  long T = 1;
};

struct TileLocation {
  std::vector<Int> index;
  RatVec translate;
};

/// Explicit tiling in coordinates adapted to B-span inside A-span: tiles are
/// products of cells along B (z_0 layers and box splits), along a complement
/// W of B inside A, and small cubes absorbing the distance to A.
class CoveringPlan {
 public:
  static CoveringPlan build(const CoveringInstance& inst);

  const Int& count() const { return count_; }
  const std::vector<Int>& cells_per_axis() const { return cells_; }
  const CoveringInstance& instance() const { return inst_; }

  /// Tile holding z (a point of Pi_T) together with its translate c; then
  /// z - c lies in (1/2) Omega_T.
  TileLocation locate(const LatticePoint& z) const;

 private:
  CoveringPlan(const CoveringInstance& inst) : inst_(inst) {}

  CoveringInstance inst_;
  Rat phi_hi_, delta_, rho_, eta_, ell0_, sigma_, w_half_, w_ext_;
  std::vector<RatVec> w_basis_;
  std::vector<std::size_t> w_pivots_;
  std::vector<Int> cells_;
  Int count_;
};

Int covering_count(const CoveringInstance& inst);

}  // namespace badlab
