#include "badlab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "badlab/lattice.hpp"
#include "badlab/parallel.hpp"
#include "badlab/simplex.hpp"

namespace badlab {

void validate(const ExperimentConfig& c) {
  if (c.A.ambient_dim() == 0 || c.A.ambient_dim() != c.B.ambient_dim())
    throw PreconditionError("A and B must live in the same R^d with d >= 1");
  if (!(c.B.dim() < c.A.dim())) throw PreconditionError("violates hypothesis 0 <= b = dim B < a = dim A");
  if (!c.A.contains(c.B)) throw PreconditionError("violates hypothesis B subset of A");
  if (c.B.dim() == 0 && std::all_of(c.B.base_point().begin(), c.B.base_point().end(), [](const Rat& v) { return v == 0; }))
    throw PreconditionError("B is the origin; a zero-dimensional B must be a nonzero vector");
  if (c.R < 1) throw PreconditionError("R must be at least 1");
  if (c.T_min < 1 || c.T_max < c.T_min) throw PreconditionError("T range must satisfy 1 <= T_min <= T_max");
  if (c.R * c.T_min < c.phi.domain_start() || c.R * c.T_min < c.psi.domain_start())
    throw PreconditionError("R * T_min lies below the domain start of psi or phi");
  if (c.sample_count < 0) throw PreconditionError("sample count must be non-negative");
  if (c.X < 1) throw PreconditionError("height X must be at least 1");
  if (Rat(c.certificate_height) < c.R * c.T_max)
    throw PreconditionError("certificate height must be at least R * T_max");
  if (c.rng != Philox::kName) throw PreconditionError("unsupported rng '" + c.rng + "'");
  Admissibility adm = admissible_pair(c.psi, c.phi, c.R * (c.T_max + 1));
  if (!adm.ok) throw PreconditionError("violates hypothesis phi(T) <= psi(T): " + adm.detail);
}

// ---------------------------------------------------------------------------
// Sampling

ChartSampler::ChartSampler(const AffineSubspace& A, const Rat& R) : chart_(A.chart()), R_(R) {
  const std::size_t a = chart_.dim();
  const std::size_t d = chart_.ambient_dim();
  const auto& p = chart_.base_point();
  const auto& v = chart_.directions();
  // Parameters s = u - R with u >= 0; constraints |p + sum_i s_i v_i| <= R.
  std::vector<std::vector<Rat>> rows;
  std::vector<Rat> rhs;
  for (std::size_t k = 0; k < d; ++k) {
    Rat shift(0);
    for (std::size_t i = 0; i < a; ++i) shift += v[i][k];
    for (int sign : {1, -1}) {
      std::vector<Rat> row(a);
      for (std::size_t i = 0; i < a; ++i) row[i] = sign * v[i][k];
      rows.push_back(std::move(row));
      rhs.push_back(R - sign * (p[k] - R * shift));
    }
  }
  for (std::size_t i = 0; i < a; ++i) {
    std::vector<Rat> row(a, Rat(0));
    row[i] = 1;
    rows.push_back(std::move(row));
    rhs.push_back(2 * R);
  }
  lo_.resize(a);
  hi_.resize(a);
  for (std::size_t i = 0; i < a; ++i) {
    for (int sign : {1, -1}) {
      std::vector<Rat> cost(a, Rat(0));
      cost[i] = sign;
      LpResult lp = solve_lp(rows, rhs, cost);
      if (lp.status != LpStatus::Optimal) throw DomainError("A does not meet the ball |w| <= R");
      if (sign > 0) {
        hi_[i] = lp.value - R;
      } else {
        lo_[i] = -lp.value - R;
      }
    }
  }
  if (a == 0 && sup_norm(p) > R) throw DomainError("A does not meet the ball |w| <= R");
}

Rat ChartSampler::box_volume() const {
  Rat v(1);
  for (std::size_t i = 0; i < lo_.size(); ++i) v *= hi_[i] - lo_[i];
  return v;
}

std::optional<std::pair<RatVec, RatVec>> ChartSampler::draw(Philox& rng) const {
  RatVec s(lo_.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = rng.uniform_dyadic(lo_[i], hi_[i], 64);
  RatVec w = chart_.at(s);
  if (sup_norm(w) > R_) return std::nullopt;
  return std::make_pair(std::move(s), std::move(w));
}

namespace {

constexpr std::uint32_t kMaxAttempts = 1000;

SampleDraw draw_sample(const ChartSampler& sampler, std::uint64_t seed, std::size_t index) {
  Philox rng(seed, index);
  for (std::uint32_t attempt = 1; attempt <= kMaxAttempts; ++attempt) {
    if (auto r = sampler.draw(rng)) return SampleDraw{std::move(r->first), std::move(r->second), attempt};
  }
  throw DomainError("rejection rate above 99.9% while sampling A inside |w| <= R");
}

}  // namespace

std::vector<SampleDraw> sample_on_A(const ExperimentConfig& c, std::size_t n) {
  ChartSampler sampler(c.A, c.R);
  std::vector<SampleDraw> out(n);
  parallel_for(n, c.jobs, [&](std::size_t i) { out[i] = draw_sample(sampler, c.seed, i); });
  return out;
}

ChartMeasure chart_measure(const ChartSampler& s, const std::vector<SampleDraw>& draws) {
  if (s.lo().size() == 1) return ChartMeasure{s.box_volume(), true};
  std::uint64_t attempts = 0;
  for (const auto& d : draws) attempts += d.attempts;
  if (attempts == 0) return ChartMeasure{s.box_volume(), false};
  return ChartMeasure{s.box_volume() * Rat(static_cast<unsigned long>(draws.size())) /
                          Rat(static_cast<unsigned long>(attempts)),
                      false};
}

// ---------------------------------------------------------------------------
// U_T membership

UtMembership u_t_member(const RatVec& w, long T, const Rat& R, const RateFunction& phi,
                        const std::vector<LatticePoint>& zeta_points) {
  const Threshold thr = Threshold::of_rate(Rat(1), phi, R * T);
  const Rat cone = 1 / (1 + sup_norm(w));
  RatVec wstar(w.size() + 1);
  wstar[0] = 1;
  std::copy(w.begin(), w.end(), wstar.begin() + 1);
  for (const auto& z : zeta_points) {
    // With M the deviation at t = z_0, the optimum lies in [M / (1 + |w|), M].
    Rat M(0);
    for (std::size_t j = 0; j < w.size(); ++j) {
      Rat e = abs(Rat(z[j + 1]) - z[0] * w[j]);
      if (e > M) M = e;
    }
    if (M * cone > thr.upper()) continue;
    RatVec zr = to_ratvec(z);
    LineFit fit = line_minimax(zr, wstar);
    if (thr.admits(fit.distance)) return UtMembership{true, z, fit.t, fit.distance};
  }
  return {};
}

UtMembership u_t_member(const RatVec& w, long T, const ExperimentConfig& c) {
  auto layer = zeta_layer(T, c.R, LiftedSpan::lift(c.A), c.phi, c.jobs);
  return u_t_member(w, T, c.R, c.phi, layer.points);
}

MeasureEstimate measure_estimate(long T, std::uint64_t zeta, std::uint64_t hits, std::size_t n,
                                 const ChartMeasure& chart, long a, const Rat& R, const RateFunction& phi) {
  if (n < 100) throw DomainError("measure_estimate requires at least 100 samples");
  MeasureEstimate m;
  m.T = T;
  m.zeta = zeta;
  m.hits = hits;
  m.n = n;
  HPInterval f = interval_eval(phi, R * T, 128);
  Rat scale(static_cast<unsigned long>(zeta));
  m.upper_bound = HPInterval{scale * pow_int(2 * f.lo / T, a), scale * pow_int(2 * f.hi / T, a), f.precision_bits};
  const Rat frac = Rat(static_cast<unsigned long>(hits)) / Rat(static_cast<unsigned long>(n));
  m.monte_carlo = frac * chart.value;
  const double p = to_double(frac);
  m.half_width = to_double(chart.value) * std::sqrt(p * (1 - p) / static_cast<double>(n));
  m.within = to_double(m.monte_carlo) <= to_double(m.upper_bound.hi) + 3 * m.half_width;
  if (f.hi < T) {
    auto radius = [&](const Rat& v) -> Rat { return (1 + R) * v / (T - v); };
    m.covering_bound = HPInterval{scale * pow_int(2 * radius(f.lo), a), scale * pow_int(2 * radius(f.hi), a),
                                  f.precision_bits};
    m.within_covering = to_double(m.monte_carlo) <= to_double(m.covering_bound->hi) + 3 * m.half_width;
  }
  return m;
}

// ---------------------------------------------------------------------------
// Pipeline

ExperimentReport run_experiment(const ExperimentConfig& c) {
  validate(c);
  ExperimentReport rep;
  rep.diagnostic = convergence_diagnostic(c.series_N, c.series_rounds, c.series(), c.jobs);
  if (rep.diagnostic.verdict == Verdict::Diverging)
    throw RefusedError("refusing to run: the series sum mu_T lambda_T diverges, but the measure argument "
                       "requires it to converge (" + rep.diagnostic.evidence + ")");

  const LiftedSpan a_span = LiftedSpan::lift(c.A);
  const LiftedSpan b_span = LiftedSpan::lift(c.B);
  SubspaceBadness cert = subspace_badness(b_span, c.psi, c.certificate_height, {}, c.jobs);
  if (const auto* hit = std::get_if<ZeroHit>(&cert)) {
    std::string pt;
    for (long v : hit->witness) pt += (pt.empty() ? "" : ",") + std::to_string(v);
    throw PreconditionError("B is not psi-badly approximable: integer point (" + pt + ") lies on its lifted span");
  }
  rep.certificate = std::get<BadnessCertificate>(cert);

  const std::size_t n = static_cast<std::size_t>(c.sample_count);
  const std::size_t layers = static_cast<std::size_t>(c.T_max - c.T_min + 1);
  ChartSampler sampler(c.A, c.R);
  std::vector<SampleDraw> draws(n);
  parallel_for(n, c.jobs, [&](std::size_t i) { draws[i] = draw_sample(sampler, c.seed, i); });
  rep.chart = chart_measure(sampler, draws);
  for (const auto& d : draws) rep.attempts += d.attempts;

  std::vector<std::vector<LatticePoint>> zpts(layers);
  parallel_for(layers, c.jobs, [&](std::size_t i) {
    zpts[i] = enumerate_slab(SlabSpec::zeta(c.T_min + static_cast<long>(i), c.R, a_span, c.phi));
  });
  for (const auto& z : zpts) rep.zeta.push_back(z.size());

  const BadnessScanner scanner(c.phi, c.X);
  std::vector<Threshold> thresholds;
  for (std::size_t i = 0; i < layers; ++i)
    thresholds.push_back(Threshold::of_rate(Rat(1), c.phi, c.R * (c.T_min + static_cast<long>(i))));

  rep.samples.resize(n);
  std::vector<std::vector<std::string>> sample_violations(n);
  parallel_for(n, c.jobs, [&](std::size_t i) {
    SampleResult& s = rep.samples[i];
    s.index = i;
    s.params = draws[i].params;
    s.w = draws[i].w;
    s.badness = scanner.scan(s.w);
    const Rat wnorm = sup_norm(s.w);
    for (std::size_t k = 0; k < layers; ++k) {
      const long T = c.T_min + static_cast<long>(k);
      UtMembership m = u_t_member(s.w, T, c.R, c.phi, zpts[k]);

      // Constructive witness: t = T, z = (T, round(T w)).
      Rat dev(0);
      bool fits = true;
      for (const auto& wj : s.w) {
        Rat e = nearest_int_dist(T * wj);
        if (e > dev) dev = e;
        fits = fits && abs(Rat(nearest_int(T * wj))) <= c.R * T;
      }
      if (fits && thresholds[k].admits(dev) && !m.member)
        sample_violations[i].push_back("sample " + std::to_string(i) + ": constructive witness at T=" +
                                       std::to_string(T) + " not detected as a U_T member");
      if (m.member) {
        // The witness gives q = T with max_j ||T w_j|| <= (1 + |w|) phi(RT).
        if (!thresholds[k].scaled(1 + wnorm).admits(dev))
          sample_violations[i].push_back("sample " + std::to_string(i) + ": hit at T=" + std::to_string(T) +
                                         " without the matching approximation quality");
        s.hits.push_back(T);
        s.witnesses.push_back(std::move(m));
      }
    }
  });
  for (auto& v : sample_violations) rep.violations.insert(rep.violations.end(), v.begin(), v.end());

  for (const auto& s : rep.samples) rep.zero_gamma += s.badness.zero() ? 1 : 0;

  if (n >= 100) {
    for (std::size_t k = 0; k < layers; ++k) {
      const long T = c.T_min + static_cast<long>(k);
      std::uint64_t hits = 0;
      for (const auto& s : rep.samples) hits += std::binary_search(s.hits.begin(), s.hits.end(), T) ? 1 : 0;
      MeasureEstimate m = measure_estimate(T, rep.zeta[k], hits, n, rep.chart, c.a(), c.R, c.phi);
      // The plain bound drops the (1 + R) T / (T - phi) factor of the
      // projection, so only the full covering bound is an invariant.
      if (!m.within_covering)
        rep.violations.push_back("Monte Carlo fraction at T=" + std::to_string(T) +
                                 " exceeds the covering bound by more than 3 half-widths");
      rep.measures.push_back(std::move(m));
    }
  }

  // Tails use the upper ends of the plain bounds, each clamped at 1.
  std::vector<Rat> capped(layers);
  for (std::size_t k = 0; k < layers; ++k) {
    const long T = c.T_min + static_cast<long>(k);
    const Rat f = Threshold::of_rate(Rat(1), c.phi, c.R * T).upper();
    capped[k] = std::min<Rat>(Rat(static_cast<unsigned long>(rep.zeta[k])) * pow_int(2 * f / T, c.a()), Rat(1));
  }
  Rat tail(0);
  rep.tails.resize(layers);
  for (std::size_t k = layers; k-- > 0;) {
    const long T0 = c.T_min + static_cast<long>(k);
    tail += capped[k];
    std::size_t multi = 0;
    for (const auto& s : rep.samples) {
      auto beyond = s.hits.end() - std::lower_bound(s.hits.begin(), s.hits.end(), T0);
      multi += beyond >= 2 ? 1 : 0;
    }
    rep.tails[k] = TailRow{T0, tail, n ? static_cast<double>(multi) / static_cast<double>(n) : 0.0};
  }
  for (std::size_t k = 0; k < layers; ++k) {
    if (k + 1 < layers && rep.tails[k + 1].tail > rep.tails[k].tail) rep.tail_monotone = false;
    if (!rep.tail_below_threshold_T0 && rep.tails[k].tail < kTailThreshold) rep.tail_below_threshold_T0 = rep.tails[k].T0;
  }
  if (!rep.tail_monotone) rep.violations.push_back("Borel-Cantelli tail is not monotone in T0");

  // Empirical distribution of gamma_phi, ordered exactly.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return rep.samples[x].badness.gamma.compare(rep.samples[y].badness.gamma, c.phi) < 0;
  });
  if (n > 0) {
    for (double p : {0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0}) {
      const std::size_t idx = order[static_cast<std::size_t>(std::floor(p * static_cast<double>(n - 1)))];
      rep.quantiles.push_back(GammaQuantile{p, idx, rep.samples[idx].badness.gamma.enclosure(c.phi)});
    }
  }
  for (const auto& g : c.gamma_grid) {
    std::size_t above = 0;
    for (const auto& s : rep.samples) above += s.badness.gamma.compare(g, c.phi) > 0 ? 1 : 0;
    rep.fractions.push_back(ThresholdFraction{g, n ? static_cast<double>(above) / static_cast<double>(n) : 0.0});
  }
  return rep;
}

}  // namespace badlab
