#pragma once

// Monte Carlo side of the measure argument: sample w on A, scan their
// phi-badness, test membership in the sets U_T (points of A whose lift comes
// within phi(RT) of a layer point of Z_T along its own ray) and compare the
// hit frequencies with the covering bound zeta_T (2 phi(RT) / T)^a.

#include <cstdint>
#include <optional>
#include <utility>
#include <string>
#include <vector>

#include "badlab/badness.hpp"
#include "badlab/geometry.hpp"
#include "badlab/rates.hpp"
#include "badlab/rng.hpp"
#include "badlab/series.hpp"

namespace badlab {

struct ExperimentConfig {
  AffineSubspace A;
  AffineSubspace B;
  RateFunction psi;
  RateFunction phi;
  Rat R{1};
  /// Height of the badness certificate for (B, psi); must reach R * T_max.
  long certificate_height = 0;
  long sample_count = 100;
  long X = 100000;
  long T_min = 2;
  long T_max = 256;
  std::uint64_t seed = 42;
  std::string rng = Philox::kName;
  long series_N = 100000;
  unsigned series_rounds = 2;
  std::vector<Rat> gamma_grid;
  unsigned jobs = 1;

  long a() const { return static_cast<long>(A.dim()); }
  long b() const { return static_cast<long>(B.dim()); }
  SeriesInstance series() const { return SeriesInstance{psi, phi, R, a(), b()}; }
};

/// Checks every hypothesis the pipeline relies on; throws PreconditionError
/// naming the violated one.
void validate(const ExperimentConfig& c);

/// Raised when the series diagnostic says the measure series diverges.
class RefusedError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Uniform sampling of { w in A : |w| <= R } through the echelon chart of A:
/// the chart parameters are the coordinates of w on the pivot axes.
class ChartSampler {
 public:
  ChartSampler(const AffineSubspace& A, const Rat& R);

  const AffineSubspace& chart() const { return chart_; }
  /// Exact bounding box of the parameter polytope.
  const RatVec& lo() const { return lo_; }
  const RatVec& hi() const { return hi_; }
  Rat box_volume() const;

  /// One attempt: dyadic parameters with 64 fractional bits, accepted iff
  /// |w| <= R exactly.
  std::optional<std::pair<RatVec, RatVec>> draw(Philox& rng) const;

 private:
  AffineSubspace chart_;
  Rat R_;
  RatVec lo_;
  RatVec hi_;
};

struct SampleDraw {
  RatVec params;
  RatVec w;
  std::uint32_t attempts = 0;
};

/// Sample i uses the stream (seed, i).
std::vector<SampleDraw> sample_on_A(const ExperimentConfig& c, std::size_t n);

struct ChartMeasure {
  Rat value;
  /// Exact for a = 1; otherwise box volume times the acceptance rate.
  bool exact = false;
};

ChartMeasure chart_measure(const ChartSampler& s, const std::vector<SampleDraw>& draws);

struct UtMembership {
  bool member = false;
  LatticePoint z;
  Rat t;
  Rat distance;
};

/// Membership of w in U_T given the layer Z_T.
UtMembership u_t_member(const RatVec& w, long T, const Rat& R, const RateFunction& phi,
                        const std::vector<LatticePoint>& zeta_points);
UtMembership u_t_member(const RatVec& w, long T, const ExperimentConfig& c);

struct MeasureEstimate {
  long T = 0;
  std::uint64_t zeta = 0;
  /// zeta_T (2 phi(RT) / T)^a: zeta_T balls of radius phi(RT)/T.
  HPInterval upper_bound;
  /// zeta_T (2 r)^a with r = (1 + R) phi(RT) / (T - phi(RT)), the radius
  /// that the central projection of a ball of radius phi(RT) around a layer
  /// point actually has. Absent when phi(RT) >= T.
  std::optional<HPInterval> covering_bound;
  std::uint64_t hits = 0;
  std::size_t n = 0;
  Rat monte_carlo;
  double half_width = 0;
  /// monte_carlo <= bound + 3 half-widths, against each bound.
  bool within = true;
  bool within_covering = true;
};

MeasureEstimate measure_estimate(long T, std::uint64_t zeta, std::uint64_t hits, std::size_t n,
                                 const ChartMeasure& chart, long a, const Rat& R, const RateFunction& phi);

struct SampleResult {
  std::size_t index = 0;
  RatVec params;
  RatVec w;
  VectorBadness badness;
  std::vector<long> hits;
  std::vector<UtMembership> witnesses;
};

struct TailRow {
  long T0 = 0;
  Rat tail;  // sum over T0 <= T <= T_max of min(upper bound, 1)
  double multi_hit_fraction = 0;
};

struct GammaQuantile {
  double p = 0;
  std::size_t sample = 0;
  HPInterval gamma;
};

struct ThresholdFraction {
  Rat gamma;
  double fraction_above = 0;
};

struct ExperimentReport {
  ConvergenceDiagnostic diagnostic;
  std::optional<BadnessCertificate> certificate;
  ChartMeasure chart;
  std::uint64_t attempts = 0;
  std::vector<SampleResult> samples;
  std::vector<std::uint64_t> zeta;  // zeta[i] for T = T_min + i
  std::vector<MeasureEstimate> measures;
  std::vector<TailRow> tails;
  std::vector<GammaQuantile> quantiles;
  std::vector<ThresholdFraction> fractions;
  std::size_t zero_gamma = 0;
  bool tail_monotone = true;
  std::optional<long> tail_below_threshold_T0;
  std::vector<std::string> violations;
};

/// Tails below this value mark the "small tail" T0 in the report.
inline const Rat kTailThreshold{1, 100};

ExperimentReport run_experiment(const ExperimentConfig& c);

}  // namespace badlab
