#include "badlab/geometry.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>

#include "badlab/simplex.hpp"

namespace badlab {

RatVec to_ratvec(const LatticePoint& z) {
  RatVec out;
  out.reserve(z.size());
  for (long v : z) out.emplace_back(v);
  return out;
}

Rat sup_norm(std::span<const Rat> x) {
  Rat m(0);
  for (const auto& v : x) {
    Rat a = abs(v);
    if (a > m) m = a;
  }
  return m;
}

long sup_norm(const LatticePoint& z) {
  long m = 0;
  for (long v : z) m = std::max(m, v < 0 ? -v : v);
  return m;
}

Rat nearest_int_dist(const Rat& x) {
  Rat f = x - Rat(floor_int(x));
  Rat g = 1 - f;
  return f < g ? f : g;
}

Int nearest_int(const Rat& x) { return floor_int(x + Rat(1, 2)); }

RowEchelon rref(std::vector<RatVec> rows, std::size_t cols) {
  RowEchelon out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && rows[p][c] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[r]);
    const Rat piv = rows[r][c];
    for (auto& v : rows[r]) v /= piv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      const Rat f = rows[i][c];
      for (std::size_t j = c; j < cols; ++j) rows[i][j] -= f * rows[r][j];
    }
    out.pivots.push_back(c);
    ++r;
  }
  rows.resize(r);
  out.rows = std::move(rows);
  return out;
}

std::vector<RatVec> null_space(const std::vector<RatVec>& rows, std::size_t cols) {
  RowEchelon e = rref(rows, cols);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<RatVec> out;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    RatVec v(cols, Rat(0));
    v[f] = 1;
    for (std::size_t i = 0; i < e.rows.size(); ++i) v[e.pivots[i]] = -e.rows[i][f];
    out.push_back(std::move(v));
  }
  return out;
}

namespace {

// x reduced against an echelon basis; zero iff x lies in the span.
RatVec residual(std::span<const Rat> x, const std::vector<RatVec>& basis, const std::vector<std::size_t>& pivots) {
  RatVec r(x.begin(), x.end());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Rat f = r[pivots[i]];
    if (f == 0) continue;
    for (std::size_t j = 0; j < r.size(); ++j) r[j] -= f * basis[i][j];
  }
  return r;
}

bool all_zero(const RatVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Rat& x) { return x == 0; });
}

}  // namespace

// ---------------------------------------------------------------------------
// AffineSubspace

AffineSubspace::AffineSubspace(RatVec base_point, std::vector<RatVec> directions)
    : base_(std::move(base_point)), dirs_(std::move(directions)) {
  for (const auto& v : dirs_)
    if (v.size() != base_.size()) throw DomainError("direction has wrong ambient dimension");
  RowEchelon e = rref(dirs_, base_.size());
  if (e.rows.size() != dirs_.size()) throw DomainError("directions are linearly dependent");
  pivots_ = std::move(e.pivots);
}

RatVec AffineSubspace::at(std::span<const Rat> params) const {
  if (params.size() != dirs_.size()) throw DomainError("wrong number of chart parameters");
  RatVec w = base_;
  for (std::size_t i = 0; i < dirs_.size(); ++i)
    for (std::size_t j = 0; j < w.size(); ++j) w[j] += params[i] * dirs_[i][j];
  return w;
}

bool AffineSubspace::contains(const RatVec& w) const {
  if (w.size() != base_.size()) return false;
  RatVec diff(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) diff[j] = w[j] - base_[j];
  RowEchelon e = rref(dirs_, base_.size());
  return all_zero(residual(diff, e.rows, e.pivots));
}

bool AffineSubspace::contains(const AffineSubspace& other) const {
  if (other.ambient_dim() != ambient_dim() || !contains(other.base_)) return false;
  RowEchelon e = rref(dirs_, base_.size());
  for (const auto& v : other.dirs_)
    if (!all_zero(residual(v, e.rows, e.pivots))) return false;
  return true;
}

AffineSubspace AffineSubspace::chart() const {
  RowEchelon e = rref(dirs_, base_.size());
  RatVec p = residual(base_, e.rows, e.pivots);
  return AffineSubspace(std::move(p), std::move(e.rows));
}

// ---------------------------------------------------------------------------
// LiftedSpan

LiftedSpan LiftedSpan::from_vectors(std::vector<RatVec> vectors, std::size_t ambient) {
  for (const auto& v : vectors)
    if (v.size() != ambient) throw DomainError("vector has wrong ambient dimension");
  LiftedSpan s;
  s.ambient_ = ambient;
  RowEchelon e = rref(std::move(vectors), ambient);
  s.basis_ = std::move(e.rows);
  s.pivots_ = std::move(e.pivots);
  s.forms_ = std::make_shared<const DistanceForms>(s);
  return s;
}

LiftedSpan LiftedSpan::lift(const AffineSubspace& a) {
  const std::size_t n = a.ambient_dim() + 1;
  std::vector<RatVec> vs;
  RatVec head(n, Rat(0));
  head[0] = 1;
  for (std::size_t j = 0; j < a.ambient_dim(); ++j) head[j + 1] = a.base_point()[j];
  vs.push_back(std::move(head));
  for (const auto& v : a.directions()) {
    RatVec u(n, Rat(0));
    for (std::size_t j = 0; j < v.size(); ++j) u[j + 1] = v[j];
    vs.push_back(std::move(u));
  }
  return from_vectors(std::move(vs), n);
}

bool LiftedSpan::contains(std::span<const Rat> x) const {
  if (x.size() != ambient_) return false;
  return all_zero(residual(x, basis_, pivots_));
}

bool LiftedSpan::contains(const LiftedSpan& other) const {
  if (other.ambient_ != ambient_) return false;
  for (const auto& v : other.basis_)
    if (!contains(v)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// DistanceForms

DistanceForms::DistanceForms(const LiftedSpan& s) {
  const std::size_t n = s.ambient_dim();
  const std::size_t m = s.dim();
  if (n > 20) throw DomainError("ambient dimension too large for circuit enumeration");
  const auto& b = s.basis();
  std::vector<std::uint32_t> masks;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask)
    if (static_cast<std::size_t>(std::popcount(mask)) <= m + 1) masks.push_back(mask);
  std::stable_sort(masks.begin(), masks.end(), [](std::uint32_t x, std::uint32_t y) {
    return std::bit_width(x) < std::bit_width(y);
  });

  for (std::uint32_t mask : masks) {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < n; ++j)
      if (mask & (1u << j)) idx.push_back(j);
    std::vector<RatVec> rows;
    for (const auto& row : b) {
      RatVec r;
      for (auto j : idx) r.push_back(row[j]);
      rows.push_back(std::move(r));
    }
    auto ns = null_space(rows, idx.size());
    if (ns.size() != 1) continue;
    const RatVec& c = ns[0];
    if (std::any_of(c.begin(), c.end(), [](const Rat& v) { return v == 0; })) continue;

    Int l(1);
    for (const auto& v : c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den().get_mpz_t());
    std::vector<Int> ints;
    Int g(0);
    for (const auto& v : c) {
      Int k = v.get_num() * (l / v.get_den());
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), k.get_mpz_t());
      ints.push_back(std::move(k));
    }
    if (ints.front() < 0) g = -g;
    DistanceForm f;
    f.coeffs.assign(n, Int(0));
    f.l1 = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      f.coeffs[idx[i]] = ints[i] / g;
      f.l1 += abs(f.coeffs[idx[i]]);
    }
    f.last = idx.back();
    forms_.push_back(std::move(f));
  }
}

Rat DistanceForms::distance(std::span<const Rat> x) const {
  Rat best(0);
  for (const auto& f : forms_) {
    Rat dot(0);
    for (std::size_t j = 0; j <= f.last; ++j)
      if (f.coeffs[j] != 0) dot += Rat(f.coeffs[j]) * x[j];
    Rat d = abs(dot) / Rat(f.l1);
    if (d > best) best = d;
  }
  return best;
}

Rat DistanceForms::distance(const LatticePoint& z) const {
  // Compare |dot_k| / l1_k by cross multiplication to stay in integers.
  Int best_num(0), best_den(1);
  Int dot;
  for (const auto& f : forms_) {
    dot = 0;
    for (std::size_t j = 0; j <= f.last; ++j)
      if (z[j] != 0) dot += f.coeffs[j] * z[j];
    dot = abs(dot);
    if (dot * best_den > best_num * f.l1) {
      best_num = dot;
      best_den = f.l1;
    }
  }
  return make_rat(best_num, best_den);
}

// ---------------------------------------------------------------------------
// Chebyshev distance by linear programming

ChebSolution cheb_solve(std::span<const Rat> x, const LiftedSpan& s) {
  const std::size_t n = s.ambient_dim();
  const std::size_t m = s.dim();
  if (x.size() != n) throw DomainError("cheb_distance: dimension mismatch");
  // Variables: t+ (m), t- (m), r. Maximize -r subject to
  //   -(B^T t)_i - r <= -x_i  and  (B^T t)_i - r <= x_i.
  const std::size_t nv = 2 * m + 1;
  std::vector<std::vector<Rat>> a;
  std::vector<Rat> rhs;
  for (std::size_t i = 0; i < n; ++i) {
    for (int sign : {-1, 1}) {
      std::vector<Rat> row(nv, Rat(0));
      for (std::size_t j = 0; j < m; ++j) {
        row[j] = sign * s.basis()[j][i];
        row[m + j] = -sign * s.basis()[j][i];
      }
      row[2 * m] = -1;
      a.push_back(std::move(row));
      rhs.push_back(sign * x[i]);
    }
  }
  std::vector<Rat> c(nv, Rat(0));
  c[2 * m] = -1;
  LpResult lp = solve_lp(a, rhs, c);
  if (lp.status != LpStatus::Optimal) throw Error("cheb_distance: LP not optimal");

  ChebSolution out;
  out.distance = -lp.value;
  out.coefficients.resize(m);
  out.nearest.assign(n, Rat(0));
  for (std::size_t j = 0; j < m; ++j) {
    out.coefficients[j] = lp.x[j] - lp.x[m + j];
    for (std::size_t i = 0; i < n; ++i) out.nearest[i] += out.coefficients[j] * s.basis()[j][i];
  }
  return out;
}

Rat cheb_distance(std::span<const Rat> x, const LiftedSpan& s) { return cheb_solve(x, s).distance; }

LineFit line_minimax(std::span<const Rat> x, std::span<const Rat> v) {
  if (x.size() != v.size()) throw DomainError("line_minimax: dimension mismatch");
  auto eval = [&](const Rat& t) {
    Rat m(0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      Rat d = abs(x[i] - t * v[i]);
      if (d > m) m = d;
    }
    return m;
  };
  LineFit best{eval(Rat(0)), Rat(0)};
  // The optimum of a convex piecewise-linear function sits where two pieces
  // x_i - t v_i = +-(x_k - t v_k) cross (i == k gives the zero of a piece).
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t k = i; k < x.size(); ++k) {
      for (int s : {-1, 1}) {
        Rat den = v[i] - s * v[k];
        if (den == 0) continue;
        Rat t = (x[i] - s * x[k]) / den;
        Rat d = eval(t);
        if (d < best.distance) best = {d, t};
      }
    }
  }
  return best;
}

}  // namespace badlab
