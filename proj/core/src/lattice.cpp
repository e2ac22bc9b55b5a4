#include "badlab/lattice.hpp"

#include <algorithm>
#include <sstream>

#include "badlab/parallel.hpp"
#include "badlab/rng.hpp"

namespace badlab {

namespace {

constexpr long double kMaxBoxPoints = 1e9L;

std::string point_string(const std::vector<long>& z) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < z.size(); ++i) os << (i ? "," : "") << z[i];
  os << ")";
  return os.str();
}

long clamp_to_long(const Int& v, long lo, long hi) {
  if (v < lo) return lo;
  if (v > hi) return hi;
  return v.get_si();
}

// Region data rearranged for the coordinate-by-coordinate walk.
//
// Every distance form N_k gives |N_k . (z - offset)| <= theta * l1_k. Once
// z_0..z_{i-1} are fixed, a form whose last nonzero coefficient sits at i
// confines z_i to an interval. The bound taken with the upper end of the
// threshold enclosure prunes; the one with the lower end marks points that
// are members without further checking.
struct Prepared {
  // Scaled by a common denominator D so that the pruning bounds come from
  // integer floor/ceil division: |D s + base + D c z| <= bound.
  struct Form {
    std::vector<Int> coeffs;
    Rat base_rat;  // -N . offset
    Int scale;
    Int base;
    Int bound_hi;
    Int bound_lo;
    Int l1;
  };

  const Region* region = nullptr;
  std::size_t n = 0;
  std::vector<Form> forms;
  std::vector<std::vector<std::size_t>> ending_at;
  std::vector<std::vector<std::size_t>> touching;

  explicit Prepared(const Region& r) : region(&r), n(r.lo.size()) {
    if (r.hi.size() != n || r.target.ambient_dim() != n) throw DomainError("region dimension mismatch");
    if (!r.offset.empty() && r.offset.size() != n) throw DomainError("region offset dimension mismatch");
    if (box_size(r) > kMaxBoxPoints) throw DomainError("box exceeds 10^9 candidate points");
    ending_at.resize(n);
    touching.resize(n);
    for (const auto& f : r.target.forms().forms()) {
      Form g;
      g.coeffs = f.coeffs;
      g.l1 = f.l1;
      g.base_rat = 0;
      if (!r.offset.empty())
        for (std::size_t j = 0; j < n; ++j)
          if (f.coeffs[j] != 0) g.base_rat -= Rat(f.coeffs[j]) * r.offset[j];
      const Rat hi = r.thickness.upper() * Rat(f.l1);
      const Rat lo = r.thickness.lower() * Rat(f.l1);
      mpz_lcm(g.scale.get_mpz_t(), hi.get_den_mpz_t(), g.base_rat.get_den_mpz_t());
      mpz_lcm(g.scale.get_mpz_t(), g.scale.get_mpz_t(), lo.get_den_mpz_t());
      g.base = g.base_rat.get_num() * (g.scale / g.base_rat.get_den());
      g.bound_hi = hi.get_num() * (g.scale / hi.get_den());
      // Rounding the lower bound down keeps the "sure" interval sound.
      g.bound_lo = floor_int(lo * Rat(g.scale));
      ending_at[f.last].push_back(forms.size());
      for (std::size_t j = 0; j < n; ++j)
        if (f.coeffs[j] != 0) touching[j].push_back(forms.size());
      forms.push_back(std::move(g));
    }
  }

  struct Scratch {
    Int x, c, t, a, b;
  };

  // Narrows [lo, hi] by |x + c z| <= bound, all integers, c != 0.
  static void narrow(Scratch& w, const Int& bound, long& lo, long& hi) {
    // Endpoints (-bound - x)/c and (bound - x)/c; their order flips with c.
    mpz_neg(w.t.get_mpz_t(), bound.get_mpz_t());
    mpz_sub(w.t.get_mpz_t(), w.t.get_mpz_t(), w.x.get_mpz_t());
    mpz_sub(w.b.get_mpz_t(), bound.get_mpz_t(), w.x.get_mpz_t());
    if (mpz_sgn(w.c.get_mpz_t()) > 0) {
      mpz_cdiv_q(w.a.get_mpz_t(), w.t.get_mpz_t(), w.c.get_mpz_t());
      mpz_fdiv_q(w.b.get_mpz_t(), w.b.get_mpz_t(), w.c.get_mpz_t());
    } else {
      mpz_cdiv_q(w.a.get_mpz_t(), w.b.get_mpz_t(), w.c.get_mpz_t());
      mpz_fdiv_q(w.b.get_mpz_t(), w.t.get_mpz_t(), w.c.get_mpz_t());
    }
    lo = clamp_to_long(w.a, lo, hi + 1);
    hi = clamp_to_long(w.b, lo - 1, hi);
  }

  Rat exact_distance(const std::vector<Int>& sums) const {
    Rat best(0);
    for (std::size_t k = 0; k < forms.size(); ++k) {
      Rat d = abs(Rat(sums[k]) + forms[k].base_rat) / Rat(forms[k].l1);
      if (d > best) best = d;
    }
    return best;
  }

  bool member(const std::vector<long>& z, const std::vector<Int>& sums) const {
    Rat d = exact_distance(sums);
    try {
      return region->thickness.compare(d) <= 0;
    } catch (const UndecidableError& e) {
      throw UndecidableError(std::string(e.what()) + " at point " + point_string(z));
    }
  }

  // Visitor: bool run(z, lo, hi) for definite members z_last in [lo, hi];
  // bool point(z) for a single member. Returning false stops the walk.
  template <class V>
  bool walk(std::size_t level, std::vector<long>& z, std::vector<std::vector<Int>>& sums, Scratch& scratch,
            bool sure, long fix_lo, long fix_hi, V& vis) const {
    long lo = region->lo[level], hi = region->hi[level];
    if (level == 0) {
      lo = std::max(lo, fix_lo);
      hi = std::min(hi, fix_hi);
    }
    long ilo = lo, ihi = hi;
    const auto& s = sums[level];
    for (std::size_t k : ending_at[level]) {
      const Form& f = forms[k];
      mpz_mul(scratch.x.get_mpz_t(), f.scale.get_mpz_t(), s[k].get_mpz_t());
      mpz_add(scratch.x.get_mpz_t(), scratch.x.get_mpz_t(), f.base.get_mpz_t());
      mpz_mul(scratch.c.get_mpz_t(), f.scale.get_mpz_t(), f.coeffs[level].get_mpz_t());
      narrow(scratch, f.bound_hi, lo, hi);
      if (sure) narrow(scratch, f.bound_lo, ilo, ihi);
      if (lo > hi) return true;
    }
    if (!sure || ilo > ihi) {
      ilo = hi + 1;
      ihi = hi;
    }
    ilo = std::max(ilo, lo);
    ihi = std::min(ihi, hi);

    const bool leaf = level + 1 == n;
    auto descend = [&](long v, bool inner) {
      z[level] = v;
      auto& next = sums[level + 1];
      for (std::size_t k = 0; k < next.size(); ++k) mpz_set(next[k].get_mpz_t(), s[k].get_mpz_t());
      for (std::size_t k : touching[level])
        if (v >= 0)
          mpz_addmul_ui(next[k].get_mpz_t(), forms[k].coeffs[level].get_mpz_t(), static_cast<unsigned long>(v));
        else
          mpz_submul_ui(next[k].get_mpz_t(), forms[k].coeffs[level].get_mpz_t(), static_cast<unsigned long>(-v));
      if (leaf) return !member(z, next) || vis.point(z);
      return walk(level + 1, z, sums, scratch, sure && inner, 0, 0, vis);
    };

    if (!leaf) {
      for (long v = lo; v <= hi; ++v)
        if (!descend(v, v >= ilo && v <= ihi)) return false;
      return true;
    }
    for (long v = lo; v < std::min(ilo, hi + 1); ++v)
      if (!descend(v, false)) return false;
    if (ilo <= ihi && !vis.run(z, ilo, ihi)) return false;
    for (long v = ilo <= ihi ? ihi + 1 : lo; v <= hi && ilo <= ihi; ++v)
      if (!descend(v, false)) return false;
    return true;
  }

  template <class V>
  void scan(long fix_lo, long fix_hi, V& vis) const {
    if (n == 0) return;
    std::vector<long> z(n, 0);
    std::vector<std::vector<Int>> sums(n + 1, std::vector<Int>(forms.size(), Int(0)));
    Scratch scratch;
    walk(0, z, sums, scratch, true, fix_lo, fix_hi, vis);
  }
};

struct Counter {
  std::uint64_t count = 0;
  bool run(std::vector<long>&, long lo, long hi) {
    count += static_cast<std::uint64_t>(hi - lo + 1);
    return true;
  }
  bool point(const std::vector<long>&) {
    ++count;
    return true;
  }
};

struct Lister {
  std::vector<LatticePoint> points;
  bool run(std::vector<long>& z, long lo, long hi) {
    for (long v = lo; v <= hi; ++v) {
      z.back() = v;
      points.push_back(z);
    }
    return true;
  }
  bool point(const std::vector<long>& z) {
    points.push_back(z);
    return true;
  }
};

struct Callback {
  const std::function<bool(const LatticePoint&)>* fn;
  bool run(std::vector<long>& z, long lo, long hi) {
    for (long v = lo; v <= hi; ++v) {
      z.back() = v;
      if (!(*fn)(z)) return false;
    }
    return true;
  }
  bool point(const std::vector<long>& z) { return (*fn)(z); }
};

}  // namespace

long double box_size(const Region& r) {
  long double total = 1;
  for (std::size_t i = 0; i < r.lo.size(); ++i) {
    if (r.hi[i] < r.lo[i]) return 0;
    total *= static_cast<long double>(r.hi[i] - r.lo[i]) + 1;
  }
  return total;
}

std::vector<LatticePoint> enumerate_region(const Region& r, unsigned jobs) {
  Prepared p(r);
  if (p.n == 0 || r.hi[0] < r.lo[0]) return {};
  if (jobs <= 1) {
    Lister l;
    p.scan(r.lo[0], r.hi[0], l);
    return std::move(l.points);
  }
  const std::size_t layers = static_cast<std::size_t>(r.hi[0] - r.lo[0] + 1);
  std::vector<std::vector<LatticePoint>> parts(layers);
  parallel_for(layers, jobs, [&](std::size_t i) {
    Lister l;
    long z0 = r.lo[0] + static_cast<long>(i);
    p.scan(z0, z0, l);
    parts[i] = std::move(l.points);
  });
  std::vector<LatticePoint> out;
  for (auto& part : parts) out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  return out;
}

std::uint64_t count_region(const Region& r, unsigned jobs) {
  Prepared p(r);
  if (p.n == 0 || r.hi[0] < r.lo[0]) return 0;
  if (jobs <= 1) {
    Counter c;
    p.scan(r.lo[0], r.hi[0], c);
    return c.count;
  }
  const std::size_t layers = static_cast<std::size_t>(r.hi[0] - r.lo[0] + 1);
  std::vector<std::uint64_t> parts(layers, 0);
  parallel_for(layers, jobs, [&](std::size_t i) {
    Counter c;
    long z0 = r.lo[0] + static_cast<long>(i);
    p.scan(z0, z0, c);
    parts[i] = c.count;
  });
  std::uint64_t total = 0;
  for (auto v : parts) total += v;
  return total;
}

void for_each_in_region(const Region& r, const std::function<bool(const LatticePoint&)>& fn) {
  Prepared p(r);
  if (p.n == 0 || r.hi[0] < r.lo[0]) return;
  Callback cb{&fn};
  p.scan(r.lo[0], r.hi[0], cb);
}

// ---------------------------------------------------------------------------
// Slabs

namespace {

SlabSpec make_slab(long T, const Rat& R, const LiftedSpan& target, Threshold thickness, long z0_lo, long z0_hi) {
  if (T < 1) throw DomainError("T must be at least 1");
  if (R < 1) throw DomainError("R must be at least 1");
  return SlabSpec{T, R, target, std::move(thickness), z0_lo, z0_hi};
}

}  // namespace

SlabSpec SlabSpec::pi(long T, const Rat& R, const LiftedSpan& a_span, const RateFunction& phi) {
  return make_slab(T, R, a_span, Threshold::of_rate(Rat(1), phi, R * T), 0, T);
}

SlabSpec SlabSpec::omega(long T, const Rat& R, const LiftedSpan& b_span, const Rat& gamma, const RateFunction& psi) {
  if (gamma <= 0) throw DomainError("gamma must be positive");
  return make_slab(T, R, b_span, Threshold::of_rate(gamma, psi, R * T), 0, T);
}

SlabSpec SlabSpec::zeta(long T, const Rat& R, const LiftedSpan& a_span, const RateFunction& phi) {
  return make_slab(T, R, a_span, Threshold::of_rate(Rat(1), phi, R * T), T, T);
}

Region SlabSpec::region() const {
  const std::size_t n = target.ambient_dim();
  const long box = floor_int(R * T).get_si();
  Region r{std::vector<long>(n, -box), std::vector<long>(n, box), {}, target, thickness};
  r.lo[0] = z0_lo;
  r.hi[0] = z0_hi;
  return r;
}

std::vector<LatticePoint> enumerate_slab(const SlabSpec& spec, unsigned jobs) {
  return enumerate_region(spec.region(), jobs);
}

std::uint64_t count_slab(const SlabSpec& spec, unsigned jobs) { return count_region(spec.region(), jobs); }

ZetaLayer zeta_layer(long T, const Rat& R, const LiftedSpan& a_span, const RateFunction& phi, unsigned jobs) {
  ZetaLayer out;
  out.points = enumerate_slab(SlabSpec::zeta(T, R, a_span, phi), jobs);
  out.count = out.points.size();
  return out;
}

// ---------------------------------------------------------------------------
// Omega-triviality and the packing lemma

OmegaCheck verify_omega_trivial(const LiftedSpan& b_span, const Rat& gamma, const RateFunction& psi, const Rat& R,
                                long T) {
  // Report the nonzero member nearest to the span (lexicographic on ties):
  // the scan order alone would favour points like (0, -1, ...) that say
  // little about why the set is large.
  OmegaCheck out;
  out.ok = true;
  Rat best;
  const DistanceForms& forms = b_span.forms();
  for (const auto& z : enumerate_region(SlabSpec::omega(T, R, b_span, gamma, psi).region())) {
    if (std::all_of(z.begin(), z.end(), [](long v) { return v == 0; })) continue;
    Rat d = forms.distance(z);
    if (out.ok || d < best) {
      out.ok = false;
      out.counterexample = z;
      best = d;
    }
  }
  return out;
}

bool in_omega(const OmegaSpec& s, std::span<const Rat> v) {
  const Rat rt = s.R * s.T;
  if (v.size() != s.b_span.ambient_dim()) return false;
  if (v[0] < 0 || v[0] > s.T) return false;
  for (std::size_t j = 1; j < v.size(); ++j)
    if (abs(v[j]) > rt) return false;
  return Threshold::of_rate(s.gamma, s.psi, rt).admits(s.b_span.forms().distance(v));
}

Region half_translate_region(const OmegaSpec& s, const RatVec& c) {
  const std::size_t n = s.b_span.ambient_dim();
  if (c.size() != n) throw DomainError("translate has wrong dimension");
  const Rat half_rt = s.R * s.T / 2;
  Region r{std::vector<long>(n), std::vector<long>(n), c, s.b_span,
           Threshold::of_rate(s.gamma / 2, s.psi, s.R * s.T)};
  r.lo[0] = ceil_int(c[0]).get_si();
  r.hi[0] = floor_int(c[0] + Rat(s.T, 2)).get_si();
  for (std::size_t j = 1; j < n; ++j) {
    r.lo[j] = ceil_int(c[j] - half_rt).get_si();
    r.hi[j] = floor_int(c[j] + half_rt).get_si();
  }
  return r;
}

HalfDilationReport half_dilation_check(const OmegaSpec& s, const std::vector<RatVec>& translates,
                                       bool require_trivial) {
  if (require_trivial) {
    OmegaCheck check = verify_omega_trivial(s);
    if (!check.ok)
      throw PreconditionError("Omega_T is not trivial: nonzero member " + point_string(*check.counterexample));
  }
  HalfDilationReport rep;
  for (const auto& c : translates) {
    ++rep.translates;
    auto pts = enumerate_region(half_translate_region(s, c));
    rep.max_members = std::max(rep.max_members, pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t k = i + 1; k < pts.size(); ++k) {
        ++rep.pairs_checked;
        RatVec d(pts[i].size()), nd(pts[i].size());
        for (std::size_t j = 0; j < d.size(); ++j) {
          d[j] = pts[i][j] - pts[k][j];
          nd[j] = -d[j];
        }
        const bool fwd = in_omega(s, d);
        const bool back = in_omega(s, nd);
        if (!fwd && !back) ++rep.difference_failures;
        if (rep.ok) {
          rep.ok = false;
          rep.violating_translate = c;
          rep.violating_pair = {pts[i], pts[k]};
          std::ostringstream os;
          os << "x=" << point_string(pts[i]) << " y=" << point_string(pts[k]) << " both in (1/2)Omega_T + c; "
             << "x-y in Omega_T: " << (fwd ? "yes" : "no") << "; y-x in Omega_T: " << (back ? "yes" : "no");
          rep.certificate = os.str();
        }
      }
    }
  }
  return rep;
}

std::vector<RatVec> random_translates(const OmegaSpec& s, std::size_t count, std::uint64_t seed) {
  const std::size_t n = s.b_span.ambient_dim();
  const Rat rt = s.R * s.T;
  const Rat half_t(s.T, 2);
  const Rat half_rt = rt / 2;
  Philox rng(seed, 0x7472616e736c6174ull);
  std::vector<RatVec> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    RatVec c(n);
    if (i % 2 == 0) {
      // c = k - y with y in B-span inside the half box: k is then a member.
      const auto& basis = s.b_span.basis();
      RatVec coef(basis.size());
      for (std::size_t b = 0; b < basis.size(); ++b)
        coef[b] = b == 0 ? rng.uniform_dyadic(Rat(0), half_t, 16) : rng.uniform_dyadic(-half_rt, half_rt, 16);
      RatVec y(n);
      for (;;) {
        std::fill(y.begin(), y.end(), Rat(0));
        for (std::size_t b = 0; b < basis.size(); ++b)
          for (std::size_t j = 0; j < n; ++j) y[j] += coef[b] * basis[b][j];
        bool inside = y[0] >= 0 && y[0] <= half_t;
        for (std::size_t j = 1; j < n && inside; ++j) inside = abs(y[j]) <= half_rt;
        if (inside) break;
        for (auto& v : coef) v /= 2;
      }
      const long kt = floor_int(half_t).get_si();
      const long kr = floor_int(half_rt).get_si();
      for (std::size_t j = 0; j < n; ++j) {
        long k = j == 0 ? rng.uniform_below(Int(kt + 1)).get_si() : rng.uniform_below(Int(2 * kr + 1)).get_si() - kr;
        c[j] = Rat(k) - y[j];
      }
    } else {
      c[0] = rng.uniform_dyadic(-half_t, Rat(s.T), 16);
      for (std::size_t j = 1; j < n; ++j) c[j] = rng.uniform_dyadic(-rt, rt, 16);
    }
    out.push_back(std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Covering

namespace {

Int ceil_pos(const Rat& x) { return ceil_int(x); }

// Cell index of v on a grid starting at `start` with cells of width `width`,
// clamped to [0, cells - 1].
Int cell_of(const Rat& v, const Rat& start, const Rat& width, const Int& cells) {
  Int k = floor_int((v - start) / width);
  if (k < 0) k = 0;
  if (k >= cells) k = cells - 1;
  return k;
}

}  // namespace

CoveringPlan CoveringPlan::build(const CoveringInstance& inst) {
  const auto& a = inst.a_span;
  const auto& b = inst.b_span;
  if (a.ambient_dim() != b.ambient_dim()) throw DomainError("covering: spans live in different dimensions");
  if (!(b.dim() < a.dim())) throw PreconditionError("covering: violates hypothesis 0 <= b = dim B < a = dim A");
  if (!a.contains(b)) throw PreconditionError("covering: B is not contained in A");
  if (inst.gamma <= 0) throw DomainError("covering: gamma must be positive");
  if (inst.T < 1 || inst.R < 1) throw DomainError("covering: need T >= 1 and R >= 1");
  const Rat rt = inst.R * inst.T;
  Admissibility adm = admissible_pair(inst.psi, inst.phi, rt);
  if (!adm.ok) throw PreconditionError("covering: phi(T) <= psi(T) fails: " + adm.detail);
  if (b.pivots().empty() || b.pivots()[0] != 0) throw PreconditionError("covering: B-span misses the z_0 axis");

  CoveringPlan p(inst);
  const std::size_t n = a.ambient_dim();
  p.phi_hi_ = Threshold::of_rate(Rat(1), inst.phi, rt).upper();
  const Rat psi_lo = Threshold::of_rate(Rat(1), inst.psi, rt).lower();
  p.delta_ = inst.gamma * psi_lo / 2;
  p.rho_ = p.delta_ / 2;
  p.eta_ = p.delta_ / 2;

  Rat kb(0);
  for (std::size_t j = 0; j < n; ++j) {
    Rat row(0);
    for (const auto& v : b.basis()) row += abs(v[j]);
    if (row > kb) kb = row;
  }
  if (kb < 1) kb = 1;
  const Rat L = (rt / 2 - p.delta_) / kb;
  p.ell0_ = std::min<Rat>(Rat(inst.T, 2) - 2 * p.delta_, L - p.delta_);
  p.sigma_ = L;
  if (p.ell0_ <= 0 || p.sigma_ <= 0) throw PreconditionError("covering: T too small for the tile construction");

  // W = A-span intersected with { x : x_p = 0 for p in pivots(B) }.
  std::vector<RatVec> rows;
  for (auto piv : b.pivots()) {
    RatVec r;
    for (const auto& v : a.basis()) r.push_back(v[piv]);
    rows.push_back(std::move(r));
  }
  std::vector<RatVec> w_vecs;
  for (const auto& t : null_space(rows, a.dim())) {
    RatVec w(n, Rat(0));
    for (std::size_t i = 0; i < t.size(); ++i)
      for (std::size_t j = 0; j < n; ++j) w[j] += t[i] * a.basis()[i][j];
    w_vecs.push_back(std::move(w));
  }
  RowEchelon we = rref(std::move(w_vecs), n);
  if (we.rows.size() != a.dim() - b.dim()) throw Error("covering: rank failure building adapted coordinates");
  p.w_basis_ = std::move(we.rows);
  p.w_pivots_ = std::move(we.pivots);
  Rat kw(0);
  for (const auto& u : p.w_basis_) kw += sup_norm(u);
  p.w_half_ = p.eta_ / kw;
  p.w_ext_ = (1 + kb) * (rt + p.phi_hi_);

  p.cells_.push_back(floor_int((inst.T + 2 * p.phi_hi_) / p.ell0_) + 1);
  for (std::size_t i = 1; i < b.pivots().size(); ++i)
    p.cells_.push_back(floor_int((2 * rt + 2 * p.phi_hi_) / (2 * p.sigma_)) + 1);
  for (std::size_t j = 0; j < p.w_basis_.size(); ++j) p.cells_.push_back(ceil_pos(p.w_ext_ / p.w_half_));
  for (std::size_t j = 0; j < n; ++j) p.cells_.push_back(ceil_pos(p.phi_hi_ / p.rho_));
  p.count_ = 1;
  for (const auto& c : p.cells_) p.count_ *= c;
  return p;
}

TileLocation CoveringPlan::locate(const LatticePoint& z) const {
  const auto& a = inst_.a_span;
  const auto& b = inst_.b_span;
  const std::size_t n = a.ambient_dim();
  const Rat rt = inst_.R * inst_.T;
  RatVec zr = to_ratvec(z);
  ChebSolution sol = cheb_solve(zr, a);
  const RatVec& ap = sol.nearest;

  TileLocation loc;
  RatVec y(n, Rat(0)), yc(n, Rat(0));
  std::size_t axis = 0;
  for (std::size_t i = 0; i < b.pivots().size(); ++i, ++axis) {
    const Rat s = ap[b.pivots()[i]];
    Rat sc;
    if (i == 0) {
      Int k = cell_of(s, -phi_hi_, ell0_, cells_[axis]);
      sc = -phi_hi_ + Rat(k) * ell0_ - delta_;
      loc.index.push_back(k);
    } else {
      const Rat start = -(rt + phi_hi_);
      Int k = cell_of(s, start, 2 * sigma_, cells_[axis]);
      sc = start + 2 * sigma_ * Rat(k) + sigma_;
      loc.index.push_back(k);
    }
    for (std::size_t j = 0; j < n; ++j) {
      y[j] += s * b.basis()[i][j];
      yc[j] += sc * b.basis()[i][j];
    }
  }
  RatVec wc(n, Rat(0));
  for (std::size_t q = 0; q < w_basis_.size(); ++q, ++axis) {
    const Rat t = ap[w_pivots_[q]] - y[w_pivots_[q]];
    Int k = cell_of(t, -w_ext_, 2 * w_half_, cells_[axis]);
    const Rat tc = -w_ext_ + 2 * w_half_ * Rat(k) + w_half_;
    loc.index.push_back(k);
    for (std::size_t j = 0; j < n; ++j) wc[j] += tc * w_basis_[q][j];
  }
  loc.translate.assign(n, Rat(0));
  for (std::size_t j = 0; j < n; ++j, ++axis) {
    const Rat e = zr[j] - ap[j];
    Int k = cell_of(e, -phi_hi_, 2 * rho_, cells_[axis]);
    const Rat ec = -phi_hi_ + 2 * rho_ * Rat(k) + rho_;
    loc.index.push_back(k);
    loc.translate[j] = yc[j] + wc[j] + ec;
  }
  return loc;
}

Int covering_count(const CoveringInstance& inst) { return CoveringPlan::build(inst).count(); }

}  // namespace badlab
