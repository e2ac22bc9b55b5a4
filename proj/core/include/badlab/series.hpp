#pragma once

// The quantities
//
//   mu_T     = (T / psi(RT))^(a-b)
//   lambda_T = (phi(RT)/T)^a - (phi(R(T+1))/(T+1))^a
//
// the series sum_T mu_T lambda_T, its convergence diagnostics, and the
// lattice-count ratios that the counting argument bounds by mu_T.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "badlab/badness.hpp"
#include "badlab/lattice.hpp"
#include "badlab/rates.hpp"

namespace badlab {

struct SeriesInstance {
  RateFunction psi;
  RateFunction phi;
  Rat R{1};
  long a = 1;
  long b = 0;
};

HPInterval to_interval(const RateValue& v);
std::string to_string(const RateValue& v);

RateValue mu_term(long T, const Rat& R, const RateFunction& psi, long a, long b, unsigned bits = 128);
RateValue lambda_term(long T, const Rat& R, const RateFunction& phi, long a, unsigned bits = 128);
RateValue series_term(long T, const SeriesInstance& inst, unsigned bits = 128);

/// Smallest T >= 1 with RT inside the domains of psi and phi.
long first_index(const SeriesInstance& inst);

struct PartialSums {
  long first_T = 1;
  std::vector<RateValue> terms;  // terms[i] belongs to T = first_T + i
  std::vector<RateValue> sums;
  /// Width of the final enclosure (zero when exact).
  Rat final_width;
};

/// Partial sums up to N. Exact while every term is rational and N <=
/// exact_limit; otherwise directed-rounding sums at `bits` bits.
PartialSums partial_sum(long N, const SeriesInstance& inst, unsigned bits = 128, long exact_limit = 1000);

enum class Verdict { Converging, Diverging, Inconclusive };
const char* to_string(Verdict v);

struct ExponentAnalysis {
  /// term ~ T^exponent * (log T)^(-log_exponent)
  Rat exponent;
  Rat log_exponent;
  bool converges = false;
  /// exponent == -1 and log_exponent == 1: divergent, outside Delta > 1/a.
  bool boundary = false;
};

ExponentAnalysis exponent_analysis(const SeriesInstance& inst);

struct ConvergenceDiagnostic {
  Verdict verdict = Verdict::Inconclusive;  // final, from the exponent analysis
  Verdict numeric = Verdict::Inconclusive;
  bool agrees = false;
  ExponentAnalysis analysis;
  long N = 0;
  unsigned rounds = 0;
  /// increments[k] = S_{2^(k+1) N} - S_{2^k N}
  std::vector<HPInterval> increments;
  std::vector<double> ratios;
  /// Local power decay -log2(ratio) and log decay estimate of the last round.
  double power_decay = 0;
  double log_decay = 0;
  std::string evidence;
};

ConvergenceDiagnostic convergence_diagnostic(long N, unsigned rounds, const SeriesInstance& inst, unsigned jobs = 1);

struct PackingRow {
  long T = 0;
  std::uint64_t pi_count = 0;
  std::uint64_t zeta = 0;
  std::uint64_t cum_zeta = 0;
  RateValue mu;
  HPInterval ratio_int;
  HPInterval ratio_cumzeta;
  std::optional<Int> nu;
};

struct PackingScan {
  std::vector<PackingRow> rows;
  double median_int = 0;
  double top_quartile_median_int = 0;
  double median_cumzeta = 0;
  double top_quartile_median_cumzeta = 0;
  bool red_flag_int = false;
  bool red_flag_cumzeta = false;
};

struct PackingInstance {
  LiftedSpan a_span;
  SeriesInstance series;
  /// When present, its height must reach R * T_hi and nu_T is reported.
  std::optional<BadnessCertificate> certificate;
};

PackingScan packing_ratio_scan(long T_lo, long T_hi, const PackingInstance& inst, unsigned jobs = 1);

}  // namespace badlab
