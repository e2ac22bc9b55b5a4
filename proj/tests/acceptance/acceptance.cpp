// Acceptance runner: one PASS/FAIL line per criterion, with indented detail
// lines underneath. `--only N` runs a single criterion; the exit status is
// non-zero when any selected criterion fails.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "badlab/badness.hpp"
#include "badlab/experiment.hpp"
#include "badlab/lattice.hpp"
#include "badlab/presets.hpp"
#include "badlab/series.hpp"
#include "cli.hpp"
#include "config.hpp"
#include "emit.hpp"
#include "oracles.hpp"

using namespace badlab;
using testing::Gen;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void note(const std::string& s) { details.push_back(s); }
  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    details.push_back(std::string(ok ? "ok    " : "FAIL  ") + what);
  }
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fixed(double x, int digits = 2) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << x;
  return os.str();
}

std::string dec(const Rat& x, int digits = 10) { return fixed(to_double(x), digits); }

const RateFunction kInv = RateFunction::power_law(Rat(1), Rat(1));
const RateFunction kRoot = RateFunction::power_law(Rat(1), Rat(1, 2));

LiftedSpan golden_span() { return LiftedSpan::lift(AffineSubspace::point(preset("golden").value)); }

struct Settings {
  fs::path configs;
  fs::path work;
};

// ---------------------------------------------------------------------------

// Random slab instance whose box stays under `budget` points, so the full
// scan oracle finishes in the time limit. T is drawn from [1, 40] and halved
// until the box fits.
Region random_instance(Gen& g, long double budget, std::string& label) {
  const std::size_t d = static_cast<std::size_t>(g.integer(1, 3));
  const std::size_t k = static_cast<std::size_t>(g.integer(0, static_cast<long>(d) - 1));
  const LiftedSpan target = LiftedSpan::lift(g.subspace(d, k, 4, 5));
  static const std::vector<Rat> radii{Rat(1), Rat(3, 2), Rat(2)};
  const Rat R = g.pick(radii);
  long T = g.integer(1, 40);
  RateFunction f = g.rate();
  const long kind = g.integer(0, 2);
  auto build = [&](long t) {
    if (!f.in_domain(R * t)) f = kInv;
    switch (kind) {
      case 0: return SlabSpec::pi(t, R, target, f);
      case 1: return SlabSpec::zeta(t, R, target, f);
      default: return SlabSpec::omega(t, R, target, Rat(g.integer(1, 8)), f);
    }
  };
  Region r = build(T).region();
  while (box_size(r) > budget && T > 1) {
    T /= 2;
    r = build(T).region();
  }
  static const char* names[] = {"pi", "zeta", "omega"};
  label = std::string(names[kind]) + " d=" + std::to_string(d) + " T=" + std::to_string(T);
  return r;
}

Outcome criterion1(const Settings&) {
  Outcome o;
  Stopwatch clock;
  Gen g(2024);
  std::size_t points = 0, equal = 0;
  long double scanned = 0;
  int max_d = 0;
  std::string first_bad;
  for (int i = 0; i < 200; ++i) {
    std::string label;
    Region r = random_instance(g, 4.0e5L, label);
    scanned += box_size(r);
    max_d = std::max(max_d, static_cast<int>(r.lo.size()) - 1);
    auto fast = enumerate_region(r);
    auto slow = testing::naive_region_forms(r);
    points += fast.size();
    if (fast == slow) ++equal;
    else if (first_bad.empty()) first_bad = label;
  }
  // A smaller batch against the LP distance, which is independent of the
  // circuit forms used by both scans above.
  Gen h(2025);
  int lp_equal = 0;
  for (int i = 0; i < 20; ++i) {
    std::string label;
    Region r = random_instance(h, 3.0e3L, label);
    lp_equal += enumerate_region(r) == testing::naive_region(r);
  }
  const double t = clock.seconds();
  o.note(std::to_string(points) + " points in total, " + fixed(static_cast<double>(scanned), 0) +
         " box points scanned, d up to " + std::to_string(max_d));
  o.require(equal == 200, "pruned == full box scan on " + std::to_string(equal) + "/200 instances" +
                              (first_bad.empty() ? "" : " (first mismatch " + first_bad + ")"));
  o.require(lp_equal == 20, "pruned == LP-distance scan on " + std::to_string(lp_equal) + "/20 instances");
  o.require(t <= 60, "runtime " + fixed(t) + " s <= 60 s");
  return o;
}

Outcome criterion2(const Settings&) {
  Outcome o;
  Stopwatch clock;
  const Preset& golden = preset("golden");
  const RatVec& w = golden.value;
  // (3 - sqrt 5) / 2 and 1 / sqrt 5 to 40 digits.
  const Rat target = parse_rat("3819660112501051517954131656343618822796/10000000000000000000000000000000000000000");
  auto full = vector_badness(w, kInv, 10000);
  const Rat g_full = *full.gamma.exact(kInv);
  o.require(abs(g_full - target) < Rat(1, 1000000),
            "gamma_emp = " + dec(g_full) + ", |gamma_emp - (3-sqrt5)/2| < 1e-6");
  o.require(full.argmin_q == 1, "argmin q = " + std::to_string(full.argmin_q));

  auto tail = vector_badness(w, kInv, 10000, 100);
  const Rat g_tail = *tail.gamma.exact(kInv);
  o.require(parse_rat("4469/10000") <= g_tail && g_tail <= parse_rat("4475/10000"),
            "min over q in [100, 10^4] = " + dec(g_tail) + " at q = " + std::to_string(tail.argmin_q) +
                ", inside [0.4469, 0.4475]");

  auto [b_full, q_full] = testing::brute_badness_inverse(w, 1, 10000);
  auto [b_tail, q_tail] = testing::brute_badness_inverse(w, 100, 10000);
  o.require(b_full == g_full && q_full == full.argmin_q && b_tail == g_tail && q_tail == tail.argmin_q,
            "exact brute-force scan agrees on value and argmin");
  o.require(golden.epsilon * 10000 < g_tail / 1000000, "stand-in error eps * X below 1e-6 * min observed value");
  const double t = clock.seconds();
  o.require(t <= 30, "runtime " + fixed(t) + " s <= 30 s");
  return o;
}

Outcome criterion3(const Settings&) {
  Outcome o;
  Stopwatch clock;
  const LiftedSpan b = golden_span();
  const Rat gamma(23, 100);
  long bad_T = 0;
  for (long T = 1; T <= 1000; ++T) {
    if (!verify_omega_trivial(b, gamma, kInv, Rat(1), T).ok) {
      bad_T = T;
      break;
    }
  }
  o.require(bad_T == 0, bad_T ? "Omega_T non-trivial at T = " + std::to_string(bad_T)
                              : "Omega_T = {0} for every T <= 1000 (gamma = 23/100)");
  auto control = verify_omega_trivial(LiftedSpan::lift(AffineSubspace::point({Rat(1, 2)})), gamma, kInv, Rat(1), 2);
  o.require(!control.ok && control.counterexample && *control.counterexample == LatticePoint{2, 1},
            "control B = {1/2}, T = 2 gives counterexample " +
                (control.counterexample ? cli::point_string(*control.counterexample) : std::string("none")));
  const double t = clock.seconds();
  o.require(t <= 300, "runtime " + fixed(t) + " s <= 300 s");
  return o;
}

Outcome criterion4(const Settings&) {
  Outcome o;
  Gen g(4);
  for (long T : {10L, 50L, 100L}) {
    const OmegaSpec s{golden_span(), Rat(23, 100), kInv, Rat(1), T};
    const auto translates = random_translates(s, 100, static_cast<std::uint64_t>(T));
    const HalfDilationReport rep = half_dilation_check(s, translates);
    o.require(rep.ok && rep.max_members <= 1,
              "T = " + std::to_string(T) + ": 100 translates, at most " + std::to_string(rep.max_members) +
                  " integer point each");

    // Difference property on rational members of each translate: any two
    // points x, y of (1/2) Omega_T + c have x - y or y - x in Omega_T.
    std::size_t pairs = 0, failures = 0;
    for (const auto& c : translates) {
      const Region r = half_translate_region(s, c);
      std::vector<RatVec> members;
      // Candidates t (1, w) + e with |e| at most the half thickness, so most
      // of them land in the slab; each is still tested exactly.
      const Rat rho = r.thickness.upper();
      const RatVec& w = preset("golden").value;
      for (int tries = 0; tries < 60 && members.size() < 6; ++tries) {
        const Rat t = Rat(T, 2) * make_rat(Int(g.integer(0, 1000)), Int(1000));
        RatVec y{t + rho * make_rat(Int(g.integer(-1000, 1000)), Int(1000)),
                 t * w[0] + rho * make_rat(Int(g.integer(-1000, 1000)), Int(1000))};
        if (y[0] < 0 || 2 * y[0] > T || abs(2 * y[1]) > T) continue;
        if (!r.thickness.admits(s.b_span.forms().distance(y))) continue;
        members.push_back(RatVec{c[0] + y[0], c[1] + y[1]});
      }
      for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t k = i + 1; k < members.size(); ++k) {
          RatVec d(members[i].size()), nd(members[i].size());
          for (std::size_t j = 0; j < d.size(); ++j) {
            d[j] = members[i][j] - members[k][j];
            nd[j] = -d[j];
          }
          ++pairs;
          if (!in_omega(s, d) && !in_omega(s, nd)) ++failures;
        }
    }
    o.require(failures == 0 && pairs > 0, "T = " + std::to_string(T) + ": difference property on " +
                                              std::to_string(pairs) + " rational pairs, " +
                                              std::to_string(failures) + " failures");
  }
  return o;
}

Outcome criterion5(const Settings&) {
  Outcome o;
  const LiftedSpan line = LiftedSpan::lift(AffineSubspace({Rat(0)}, {{Rat(1)}}));
  const SeriesInstance si{kInv, kInv, Rat(1), 1, 0};
  auto cert = subspace_badness(golden_span(), kInv, 300);
  const PackingScan scan = packing_ratio_scan(10, 300, PackingInstance{line, si, std::get<BadnessCertificate>(cert)});
  // Locked band: (T+1)(2T+1)/T^2 lies in (2, 2.31] on [10, 300].
  const Rat lo(2), hi(232, 100);
  bool in_band = true;
  Rat min_r(100), max_r(0);
  for (const auto& row : scan.rows) {
    in_band = in_band && row.ratio_int.lo >= lo && row.ratio_int.hi <= hi;
    min_r = std::min(min_r, row.ratio_int.lo);
    max_r = std::max(max_r, row.ratio_int.hi);
  }
  o.require(scan.rows.size() == 291, std::to_string(scan.rows.size()) + " rows for T in [10, 300]");
  o.require(in_band, "pi_count / mu_T in [" + dec(min_r, 4) + ", " + dec(max_r, 4) + "] within band [2, 2.32]");
  o.require(scan.top_quartile_median_int <= 2 * scan.median_int,
            "top-quartile median " + fixed(scan.top_quartile_median_int, 4) + " <= 2 x median " +
                fixed(scan.median_int, 4));
  o.note("cumulative zeta / mu_T: median " + fixed(scan.median_cumzeta, 4) + ", top-quartile median " +
         fixed(scan.top_quartile_median_cumzeta, 4) + (scan.red_flag_cumzeta ? " (red flag)" : ""));
  std::size_t with_nu = 0;
  for (const auto& row : scan.rows) with_nu += row.nu.has_value();
  o.note("covering count nu_T available on " + std::to_string(with_nu) + " rows");
  return o;
}

Outcome criterion6(const Settings&) {
  Outcome o;
  Stopwatch clock;
  struct Case {
    Rat delta;
    Verdict expected;
  };
  for (const Case& c : {Case{Rat(2), Verdict::Converging}, Case{Rat(1, 2), Verdict::Diverging},
                        Case{Rat(1), Verdict::Diverging}}) {
    const SeriesInstance si{kRoot, RateFunction::power_log(Rat(1), Rat(1, 2), c.delta, Rat(3)), Rat(1), 1, 0};
    const auto d = convergence_diagnostic(100000, 2, si);
    o.require(d.verdict == c.expected && d.agrees,
              "Delta = " + to_string(c.delta) + ": " + to_string(d.verdict) + " (numeric " + to_string(d.numeric) +
                  ", exponent analysis " + (d.analysis.converges ? "converges" : "diverges") +
                  (d.analysis.boundary ? ", boundary" : "") + ")");
  }
  const double t = clock.seconds();
  o.require(t <= 10, "runtime " + fixed(t) + " s <= 10 s");
  return o;
}

// mu_{T+1} > mu_T, refining the enclosures when they overlap.
bool mu_increases(long T, const SeriesInstance& si) {
  for (unsigned bits : {128u, 512u, 2048u}) {
    const HPInterval a = to_interval(mu_term(T, si.R, si.psi, si.a, si.b, bits));
    const HPInterval b = to_interval(mu_term(T + 1, si.R, si.psi, si.a, si.b, bits));
    if (b.lo > a.hi) return true;
    if (b.hi <= a.lo && a.is_point() && b.is_point()) return false;
  }
  return false;
}

bool lambda_positive(long T, const SeriesInstance& si) {
  for (unsigned bits : {128u, 512u, 2048u})
    if (to_interval(lambda_term(T, si.R, si.phi, si.a, bits)).lo > 0) return true;
  return false;
}

Outcome criterion7(const Settings&) {
  Outcome o;
  Stopwatch clock;
  Gen g(7);
  std::size_t instances = 0, checks = 0, lambda_bad = 0, mu_bad = 0;
  while (instances < 1000) {
    const RateFunction psi = g.rate();
    const RateFunction phi = g.rate();
    if (!admissible_pair(psi, phi, Rat(2000)).ok) continue;
    const long a = g.integer(1, 3);
    const SeriesInstance si{psi, phi, make_rat(Int(g.integer(2, 4)), Int(2)), a, g.integer(0, a - 1)};
    ++instances;
    for (long T = first_index(si); T <= 1000; ++T) {
      ++checks;
      if (!lambda_positive(T, si)) ++lambda_bad;
      if (!mu_increases(T, si)) ++mu_bad;
    }
  }
  o.require(lambda_bad == 0, "lambda_T > 0 on all " + std::to_string(checks) + " (instance, T) pairs");
  o.require(mu_bad == 0, "mu_T strictly increasing on all " + std::to_string(checks) + " pairs");
  o.note("runtime " + fixed(clock.seconds()) + " s");
  return o;
}

Outcome criterion8(const Settings&) {
  Outcome o;
  for (const char* name : {"golden", "cbrt2_pair"}) {
    const RatVec& w = preset(name).value;
    const LineDistanceAudit a = line_distance_audit(w, kInv, 1000);
    // Recheck every row independently of the audit's own flag.
    bool rows_ok = a.rows.size() == 1000;
    const Rat lower = 1 / (1 + sup_norm(w));
    for (const auto& row : a.rows) rows_ok = rows_ok && row.M * lower <= row.D && row.D <= row.M;
    o.require(a.sandwich_holds && rows_ok,
              std::string(name) + ": M/(1+|w|) <= D <= M on all x_0 <= 1000 (D/M in [" +
                  (a.min_ratio ? dec(*a.min_ratio, 6) : "-") + ", " + (a.max_ratio ? dec(*a.max_ratio, 6) : "-") +
                  "], lower factor " + dec(lower, 6) + ")");
  }
  return o;
}

// ---------------------------------------------------------------------------
// Criteria 9 and 10 drive the CLI on the cubic pair config.

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells(1);
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') quoted = !quoted;
    else if (ch == ',' && !quoted) cells.emplace_back();
    else cells.back() += ch;
  }
  return cells;
}

// Rows of a CSV file keyed by header name.
std::vector<std::map<std::string, std::string>> read_csv(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::string line;
  std::vector<std::map<std::string, std::string>> rows;
  if (!std::getline(in, line)) return rows;
  const auto header = split_csv(line);
  while (std::getline(in, line)) {
    const auto cells = split_csv(line);
    std::map<std::string, std::string> row;
    for (std::size_t i = 0; i < header.size() && i < cells.size(); ++i) row[header[i]] = cells[i];
    rows.push_back(std::move(row));
  }
  return rows;
}

int run_montecarlo(const Settings& s, const fs::path& out, unsigned jobs) {
  fs::remove_all(out);
  std::ostringstream sink_out, sink_err;
  return cli::run({"--jobs", std::to_string(jobs), "montecarlo", "--config", (s.configs / "cubic_pair.cfg").string(),
                   "--out", out.string()},
                  sink_out, sink_err);
}

Outcome criterion9(const Settings& s) {
  Outcome o;
  Stopwatch clock;
  const fs::path a = s.work / "c9_run1", b = s.work / "c9_run2";
  const int code_a = run_montecarlo(s, a, 1);
  const int code_b = run_montecarlo(s, b, 2);
  o.require(code_a == 0 && code_b == 0,
            "montecarlo exit codes " + std::to_string(code_a) + ", " + std::to_string(code_b));
  bool same = true;
  for (const char* f : {"report.json", "samples.csv", "tails.csv", "measures.csv"})
    same = same && fs::exists(a / f) && slurp(a / f) == slurp(b / f);
  o.require(same, "two runs (seed 42, --jobs 1 and 2) give byte-identical report.json, samples.csv, tails.csv, "
                  "measures.csv");

  const cli::ParsedConfig pc = cli::parse_config(s.configs / "cubic_pair.cfg");
  const ExperimentConfig& c = pc.config;
  const auto draws = sample_on_A(c, static_cast<std::size_t>(c.sample_count));
  const BadnessScanner lo(c.phi, c.X), hi(c.phi, 2 * c.X);
  std::size_t monotone = 0;
  for (const auto& d : draws)
    monotone += hi.scan(d.w).gamma.compare(lo.scan(d.w).gamma, c.phi) != std::strong_ordering::greater;
  o.require(monotone == draws.size(), "gamma_phi(X = 2e5) <= gamma_phi(X = 1e5) on " + std::to_string(monotone) +
                                          "/" + std::to_string(draws.size()) + " samples");

  // Measure rows for T in [2, 128].
  std::size_t rows = 0, within = 0, within_cov = 0;
  std::string worst;
  double worst_excess = 0;
  for (auto& row : read_csv(a / "measures.csv")) {
    if (std::stol(row["T"]) > 128) continue;
    ++rows;
    const double ub = std::stod(row["upper_bound_num"]), mc = std::stod(row["monte_carlo_num"]),
                 hw = std::stod(row["half_width"]);
    within += row["within"] == "true";
    within_cov += row["within_covering"] == "true";
    if (mc - ub - 3 * hw > worst_excess) {
      worst_excess = mc - ub - 3 * hw;
      worst = "T = " + row["T"] + ": MC " + fixed(mc, 3) + " vs bound " + fixed(ub, 3) + " + 3 x " + fixed(hw, 3);
    }
  }
  o.require(rows == 127 && within == rows,
            "MC fraction <= zeta_T (2 phi(RT)/T)^a + 3 half-widths on " + std::to_string(within) + "/" +
                std::to_string(rows) + " rows" + (worst.empty() ? "" : " (worst " + worst + ")"));
  o.note("with the projected radius (1+R) phi/(T - phi): " + std::to_string(within_cov) + "/" +
         std::to_string(rows) + " rows within");
  const double t = clock.seconds();
  o.require(t <= 600, "runtime " + fixed(t) + " s <= 600 s");
  return o;
}

Outcome criterion10(const Settings& s) {
  Outcome o;
  const fs::path dir = s.work / "c10_run";
  o.require(run_montecarlo(s, dir, 1) == 0, "montecarlo run completed");
  std::vector<std::pair<long, Rat>> tails;
  for (auto& row : read_csv(dir / "tails.csv"))
    tails.emplace_back(std::stol(row["T0"]), cli::parse_cell_rat(row["tail_bound"]));
  bool monotone = !tails.empty();
  for (std::size_t i = 1; i < tails.size(); ++i) monotone = monotone && tails[i].second <= tails[i - 1].second;
  o.require(monotone, "tail bound non-increasing in T0 over " + std::to_string(tails.size()) + " rows");
  std::optional<long> below;
  for (const auto& [T0, tail] : tails)
    if (tail < Rat(1, 100)) {
      below = T0;
      break;
    }
  o.require(below && *below <= 256,
            below ? "tail < 1e-2 from T0 = " + std::to_string(*below) + " (<= 256)" : "tail never below 1e-2");
  if (!tails.empty()) o.note("tail at T0 = " + std::to_string(tails.front().first) + ": " + dec(tails.front().second, 4));
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"badlab acceptance runner"};
  int only = 0;
  Settings s;
  std::string configs = BADLAB_SOURCE_DIR "/configs";
  std::string work = (fs::temp_directory_path() / "badlab_acceptance").string();
  app.add_option("--only", only, "Run a single criterion")->check(CLI::Range(1, 10));
  app.add_option("--configs", configs, "Directory with the experiment configs");
  app.add_option("--work", work, "Scratch directory for CLI outputs");
  CLI11_PARSE(app, argc, argv);
  s.configs = configs;
  s.work = work;
  fs::create_directories(s.work);

  const std::vector<std::pair<std::string, std::function<Outcome(const Settings&)>>> criteria{
      {"enumeration matches the full box scan", criterion1},
      {"golden vector badness", criterion2},
      {"Omega_T trivial on the golden instance", criterion3},
      {"half-dilated translates hold at most one point", criterion4},
      {"integer point count over mu_T stays in its band", criterion5},
      {"convergence threshold in Delta", criterion6},
      {"lambda positive, mu increasing", criterion7},
      {"line distance sandwich on golden and cubic pair", criterion8},
      {"Monte Carlo pipeline determinism and bounds", criterion9},
      {"Borel-Cantelli tail", criterion10},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (only && only != id) continue;
    Outcome o;
    try {
      o = criteria[i].second(s);
    } catch (const std::exception& e) {
      o.pass = false;
      o.note(std::string("exception: ") + e.what());
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << criteria[i].first << '\n';
    for (const auto& d : o.details) std::cout << "    " << d << '\n';
    std::cout.flush();
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
