#pragma once

// Rational affine subspaces of R^d, their lifts to linear subspaces of
// R^(d+1), and exact Chebyshev (sup-norm) distances to those lifts.

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "badlab/exactnum.hpp"

namespace badlab {

using RatVec = std::vector<Rat>;
using LatticePoint = std::vector<long>;

RatVec to_ratvec(const LatticePoint& z);

Rat sup_norm(std::span<const Rat> x);
long sup_norm(const LatticePoint& z);

/// Distance from x to the nearest integer, ||x||.
Rat nearest_int_dist(const Rat& x);
/// Nearest integer, ties rounded up.
Int nearest_int(const Rat& x);

struct RowEchelon {
  std::vector<RatVec> rows;  // nonzero rows of the reduced echelon form
  std::vector<std::size_t> pivots;
};

/// Reduced row echelon form of the given rows (each of length `cols`).
RowEchelon rref(std::vector<RatVec> rows, std::size_t cols);

/// Basis of { x : r.x = 0 for every row r }.
std::vector<RatVec> null_space(const std::vector<RatVec>& rows, std::size_t cols);

class AffineSubspace {
 public:
  /// base_point + span(directions). The directions must be linearly
  /// independent; DomainError otherwise.
  AffineSubspace(RatVec base_point, std::vector<RatVec> directions);

  static AffineSubspace point(RatVec p) { return AffineSubspace(std::move(p), {}); }

  std::size_t ambient_dim() const { return base_.size(); }
  std::size_t dim() const { return dirs_.size(); }
  const RatVec& base_point() const { return base_; }
  const std::vector<RatVec>& directions() const { return dirs_; }

  RatVec at(std::span<const Rat> params) const;
  bool contains(const RatVec& w) const;
  bool contains(const AffineSubspace& other) const;

  /// Same subspace with directions in reduced echelon form and the base point
  /// zero on the pivot coordinates; then w[pivots[i]] is the i-th parameter.
  AffineSubspace chart() const;
  const std::vector<std::size_t>& pivots() const { return pivots_; }

 private:
  RatVec base_;
  std::vector<RatVec> dirs_;
  std::vector<std::size_t> pivots_;
};

struct DistanceForm {
  std::vector<Int> coeffs;  // primitive integer circuit of the orthogonal complement
  Int l1;                   // sum of |coeffs|
  std::size_t last = 0;     // largest index with a nonzero coefficient
};

class LiftedSpan;

/// dist_inf(x, S) = max_k |N_k . x| / ||N_k||_1 over the circuits N_k of the
/// orthogonal complement of S (these are the vertices of the dual polytope).
class DistanceForms {
 public:
  explicit DistanceForms(const LiftedSpan& s);

  const std::vector<DistanceForm>& forms() const { return forms_; }
  Rat distance(std::span<const Rat> x) const;
  Rat distance(const LatticePoint& z) const;

 private:
  std::vector<DistanceForm> forms_;
};

/// Linear subspace of R^n, typically the lift span{(1, p), (0, v_i)} of an
/// affine subspace.
class LiftedSpan {
 public:
  static LiftedSpan lift(const AffineSubspace& a);
  /// Span of arbitrary vectors (dependent ones are dropped).
  static LiftedSpan from_vectors(std::vector<RatVec> vectors, std::size_t ambient);
  static LiftedSpan zero(std::size_t ambient) { return from_vectors({}, ambient); }

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return basis_.size(); }
  /// Reduced echelon basis.
  const std::vector<RatVec>& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  bool contains(std::span<const Rat> x) const;
  bool contains(const LiftedSpan& other) const;
  const DistanceForms& forms() const { return *forms_; }

 private:
  LiftedSpan() = default;

  std::size_t ambient_ = 0;
  std::vector<RatVec> basis_;
  std::vector<std::size_t> pivots_;
  std::shared_ptr<const DistanceForms> forms_;
};

struct ChebSolution {
  Rat distance;
  RatVec coefficients;  // in terms of s.basis()
  RatVec nearest;       // a point of s realising the distance
};

/// Exact min over y in s of |x - y|_inf by the rational simplex.
ChebSolution cheb_solve(std::span<const Rat> x, const LiftedSpan& s);
Rat cheb_distance(std::span<const Rat> x, const LiftedSpan& s);

struct LineFit {
  Rat distance;
  Rat t;
};

/// min over real t of |x - t v|_inf, by scanning the breakpoints.
LineFit line_minimax(std::span<const Rat> x, std::span<const Rat> v);

}  // namespace badlab
