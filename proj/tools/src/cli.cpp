#include "cli.hpp"

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "badlab/badness.hpp"
#include "badlab/experiment.hpp"
#include "badlab/lattice.hpp"
#include "badlab/series.hpp"
#include "badlab/version.hpp"
#include "config.hpp"
#include "emit.hpp"

namespace badlab::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using SteadyClock = std::chrono::steady_clock;
using SystemClock = std::chrono::system_clock;

struct Context {
  std::ostream& out;
  std::ostream& err;
  unsigned jobs = 1;
  std::vector<std::string> args;
};

// Start/end bookkeeping shared by every command's manifest.
class RunClock {
 public:
  RunClock() : wall_(SystemClock::now()), steady_(SteadyClock::now()) {}

  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(SteadyClock::now() - steady_).count();
  }

  json manifest(const Context& ctx, const std::string& command, const ParsedConfig& pc, json parameters) const {
    json m;
    m["tool"] = "badlab";
    m["version"] = kVersion;
    m["command"] = command;
    m["argv"] = ctx.args;
    m["config"] = pc.echo;
    m["config_hash"] = pc.hash;
    m["seed"] = pc.config.seed;
    m["jobs"] = ctx.jobs;
    m["started"] = iso_utc(wall_);
    m["finished"] = iso_utc(SystemClock::now());
    m["wall_time_ms"] = elapsed_ms();
    m["parameters"] = std::move(parameters);
    return m;
  }

 private:
  SystemClock::time_point wall_;
  SteadyClock::time_point steady_;
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json ratio_json(const RateRatio& g, const RateFunction& f) {
  const HPInterval enc = g.enclosure(f, 128);
  const auto exact = g.exact(f);
  json j;
  j["numerator"] = format_rat(g.numerator);
  j["height"] = format_rat(g.height);
  j["value"] = exact ? format_rat(*exact) : format_value(enc);
  j["value_num"] = to_double(enc.midpoint());
  return j;
}

json certificate_json(const BadnessCertificate& c) {
  json j;
  j["rate"] = c.rate.describe();
  j["height"] = c.height;
  j["gamma"] = ratio_json(c.gamma, c.rate);
  j["witness"] = c.witness;
  return j;
}

json interval_json(const HPInterval& x) {
  json j;
  j["value"] = format_value(x);
  j["value_num"] = to_double(x.midpoint());
  return j;
}

// gamma for an Omega_T test: the flag, then the config, then a rational just
// below the certified constant at height ceil(RT).
struct GammaChoice {
  Rat gamma;
  std::string source;
  std::optional<BadnessCertificate> certificate;
  std::optional<LatticePoint> zero_hit;
};

GammaChoice choose_gamma(const ParsedConfig& pc, long T, const std::string& flag, unsigned jobs) {
  const ExperimentConfig& c = pc.config;
  GammaChoice g;
  const long H = ceil_int(c.R * T).get_si();
  auto res = subspace_badness(LiftedSpan::lift(c.B), c.psi, H, {}, jobs);
  if (auto* cert = std::get_if<BadnessCertificate>(&res))
    g.certificate = *cert;
  else
    g.zero_hit = std::get<ZeroHit>(res).witness;

  if (!flag.empty()) {
    g.gamma = parse_rat(flag);
    g.source = "flag";
  } else if (pc.gamma) {
    g.gamma = *pc.gamma;
    g.source = "config";
  } else if (g.certificate) {
    g.gamma = g.certificate->gamma_lower() * Rat(1023, 1024);
    g.source = "certificate";
  } else {
    throw PreconditionError("B-span holds the integer point " + point_string(*g.zero_hit) +
                            ", so no positive gamma is certified; pass --gamma or set gamma in the config");
  }
  if (g.gamma <= 0) throw DomainError("gamma must be positive");
  return g;
}

// ---------------------------------------------------------------------------

struct BadnessOpts {
  std::string config, target = "B", rate = "psi", out;
  long height = 0;
};

int cmd_badness(Context& ctx, const BadnessOpts& o) {
  RunClock clock;
  const ParsedConfig pc = parse_config(o.config);
  const ExperimentConfig& c = pc.config;
  const AffineSubspace& sub = o.target == "A" ? c.A : c.B;
  const RateFunction& f = o.rate == "phi" ? c.phi : c.psi;
  const long H = o.height > 0 ? o.height : c.certificate_height;

  const auto res = subspace_badness(LiftedSpan::lift(sub), f, H, {}, ctx.jobs);
  json j;
  j["target"] = o.target;
  j["rate"] = f.describe();
  j["height"] = H;
  if (const auto* cert = std::get_if<BadnessCertificate>(&res)) {
    j["outcome"] = "certificate";
    j["gamma"] = ratio_json(cert->gamma, f);
    j["witness"] = cert->witness;
    j["witness_height"] = sup_norm(cert->witness);
  } else {
    const auto& hit = std::get<ZeroHit>(res);
    j["outcome"] = "zero_hit";
    j["gamma"] = json{{"value", "0"}, {"value_num", 0.0}};
    j["witness"] = hit.witness;
    j["witness_height"] = sup_norm(hit.witness);
  }

  if (o.out.empty()) {
    ctx.out << dump(j);
  } else {
    write_file(o.out, dump(j));
    write_file(o.out + ".manifest.json",
               dump(clock.manifest(ctx, "badness", pc,
                                   {{"target", o.target}, {"rate", o.rate}, {"height", H}, {"out", o.out}})));
  }
  return kOk;
}

struct EnumerateOpts {
  std::string config, set = "pi", gamma, out;
  long T = 0;
};

int cmd_enumerate(Context& ctx, const EnumerateOpts& o) {
  RunClock clock;
  const ParsedConfig pc = parse_config(o.config);
  const ExperimentConfig& c = pc.config;
  if (o.T < 1) throw DomainError("--T must be at least 1");

  std::optional<SlabSpec> spec;
  json summary;
  if (o.set == "pi") {
    spec = SlabSpec::pi(o.T, c.R, LiftedSpan::lift(c.A), c.phi);
  } else if (o.set == "zeta") {
    spec = SlabSpec::zeta(o.T, c.R, LiftedSpan::lift(c.A), c.phi);
  } else {
    const GammaChoice g = choose_gamma(pc, o.T, o.gamma, ctx.jobs);
    spec = SlabSpec::omega(o.T, c.R, LiftedSpan::lift(c.B), g.gamma, c.psi);
    summary["gamma"] = format_rat(g.gamma);
    summary["gamma_source"] = g.source;
  }

  const auto t0 = SteadyClock::now();
  const auto points = enumerate_slab(*spec, ctx.jobs);
  const double ms = std::chrono::duration<double, std::milli>(SteadyClock::now() - t0).count();

  std::string csv;
  {
    std::vector<std::string> header;
    for (std::size_t i = 0; i < spec->target.ambient_dim(); ++i) header.push_back("z" + std::to_string(i));
    csv = csv_row(header);
  }
  for (const auto& z : points) {
    std::vector<std::string> row;
    for (long v : z) row.push_back(std::to_string(v));
    csv += csv_row(row);
  }

  summary["set"] = o.set;
  summary["T"] = o.T;
  summary["R"] = format_rat(c.R);
  summary["count"] = points.size();
  summary["thickness"] = spec->thickness.describe();
  summary["wall_time_ms"] = ms;

  if (o.out.empty()) {
    ctx.out << csv;
    ctx.err << dump(summary);
  } else {
    fs::create_directories(o.out);
    write_file(fs::path(o.out) / "points.csv", csv);
    write_file(fs::path(o.out) / "summary.json", dump(summary));
    write_file(fs::path(o.out) / "manifest.json",
               dump(clock.manifest(ctx, "enumerate", pc,
                                   {{"T", o.T}, {"set", o.set}, {"gamma", o.gamma}, {"out", o.out}})));
    ctx.out << dump(summary);
  }
  return kOk;
}

struct SeriesOpts {
  std::string config, out;
  std::optional<long> N;  // defaults to series.N from the config
  long lattice_max = 256;
  unsigned bits = 128;
  bool diagnostic = false;
};

json diagnostic_json(const ConvergenceDiagnostic& d) {
  json j;
  j["verdict"] = to_string(d.verdict);
  j["numeric"] = to_string(d.numeric);
  j["agrees"] = d.agrees;
  j["exponent"] = format_rat(d.analysis.exponent);
  j["log_exponent"] = format_rat(d.analysis.log_exponent);
  j["boundary"] = d.analysis.boundary;
  j["N"] = d.N;
  j["rounds"] = d.rounds;
  json inc = json::array();
  for (const auto& x : d.increments) inc.push_back(interval_json(x));
  j["increments"] = inc;
  j["ratios"] = d.ratios;
  j["power_decay"] = d.power_decay;
  j["log_decay"] = d.log_decay;
  j["evidence"] = d.evidence;
  return j;
}

int cmd_series(Context& ctx, const SeriesOpts& o) {
  RunClock clock;
  const ParsedConfig pc = parse_config(o.config);
  const ExperimentConfig& c = pc.config;
  const SeriesInstance inst = c.series();
  const long N = o.N.value_or(c.series_N);
  if (N < 1) throw DomainError("--N must be at least 1");

  const PartialSums ps = partial_sum(N, inst, o.bits);
  const long first = ps.first_T;
  const long lmax = std::min(N, o.lattice_max);
  std::optional<PackingScan> scan;
  if (lmax >= first)
    scan = packing_ratio_scan(first, lmax, PackingInstance{LiftedSpan::lift(c.A), inst, std::nullopt}, ctx.jobs);

  std::string csv = csv_row({"T", "mu", "lambda", "term", "partial_sum", "zeta", "pi_count", "ratio_int",
                             "ratio_cumzeta"});
  for (std::size_t i = 0; i < ps.terms.size(); ++i) {
    const long T = first + static_cast<long>(i);
    std::vector<std::string> row{std::to_string(T),
                                 format_value(mu_term(T, c.R, c.psi, inst.a, inst.b, o.bits)),
                                 format_value(lambda_term(T, c.R, c.phi, inst.a, o.bits)),
                                 format_value(ps.terms[i]),
                                 format_value(ps.sums[i])};
    if (scan && i < scan->rows.size()) {
      const PackingRow& r = scan->rows[i];
      row.push_back(std::to_string(r.zeta));
      row.push_back(std::to_string(r.pi_count));
      row.push_back(format_value(r.ratio_int));
      row.push_back(format_value(r.ratio_cumzeta));
    } else {
      row.insert(row.end(), 4, "");
    }
    csv += csv_row(row);
  }

  const ExponentAnalysis ea = exponent_analysis(inst);
  json summary;
  summary["first_T"] = first;
  summary["N"] = N;
  summary["partial_sum"] = interval_json(to_interval(ps.sums.back()));
  summary["final_width"] = format_rat(ps.final_width);
  summary["exponent"] = format_rat(ea.exponent);
  summary["log_exponent"] = format_rat(ea.log_exponent);
  summary["converges"] = ea.converges;
  summary["boundary"] = ea.boundary;
  if (scan) {
    summary["lattice_max"] = lmax;
    summary["median_ratio_int"] = scan->median_int;
    summary["top_quartile_median_ratio_int"] = scan->top_quartile_median_int;
    summary["red_flag_int"] = scan->red_flag_int;
    summary["median_ratio_cumzeta"] = scan->median_cumzeta;
    summary["top_quartile_median_ratio_cumzeta"] = scan->top_quartile_median_cumzeta;
    summary["red_flag_cumzeta"] = scan->red_flag_cumzeta;
  }
  if (o.diagnostic)
    summary["diagnostic"] = diagnostic_json(convergence_diagnostic(c.series_N, c.series_rounds, inst, ctx.jobs));

  if (o.out.empty()) {
    ctx.out << csv;
    ctx.err << dump(summary);
  } else {
    write_file(o.out, csv);
    json m = clock.manifest(ctx, "series", pc,
                            {{"N", N}, {"lattice_max", o.lattice_max}, {"bits", o.bits}, {"out", o.out}});
    m["summary"] = summary;
    write_file(o.out + ".manifest.json", dump(m));
    ctx.out << dump(summary);
  }
  return kOk;
}

struct MonteCarloOpts {
  std::string config, out;
};

std::string samples_csv(const ExperimentReport& r, const ExperimentConfig& c) {
  std::vector<std::string> header{"sample"};
  for (long i = 1; i <= c.a(); ++i) header.push_back("t" + std::to_string(i));
  for (std::size_t j = 1; j <= c.A.ambient_dim(); ++j) header.push_back("w" + std::to_string(j));
  for (const char* h : {"gamma_phi", "gamma_phi_num", "argmin_q", "hits"}) header.push_back(h);
  std::string csv = csv_row(header);
  for (const auto& s : r.samples) {
    std::vector<std::string> row{std::to_string(s.index)};
    for (const auto& t : s.params) row.push_back(format_rat(t));
    for (const auto& w : s.w) row.push_back(to_string(w));
    const auto exact = s.badness.gamma.exact(c.phi);
    const HPInterval enc = s.badness.gamma.enclosure(c.phi, 128);
    row.push_back(exact ? format_rat(*exact) : format_value(enc));
    std::ostringstream num;
    num.precision(17);
    num << to_double(enc.midpoint());
    row.push_back(num.str());
    row.push_back(std::to_string(s.badness.argmin_q));
    std::string hits;
    for (long T : s.hits) hits += (hits.empty() ? "" : " ") + std::to_string(T);
    row.push_back(hits);
    csv += csv_row(row);
  }
  return csv;
}

std::string num_cell(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

int cmd_montecarlo(Context& ctx, const MonteCarloOpts& o) {
  RunClock clock;
  const ParsedConfig pc = parse_config(o.config);
  ExperimentConfig c = pc.config;
  c.jobs = ctx.jobs;
  const ExperimentReport r = run_experiment(c);

  fs::create_directories(o.out);
  write_file(fs::path(o.out) / "samples.csv", samples_csv(r, c));

  std::string tails = csv_row({"T0", "tail_bound", "tail_bound_num", "multi_hit_fraction"});
  for (const auto& t : r.tails)
    tails += csv_row({std::to_string(t.T0), format_rat(t.tail), num_cell(to_double(t.tail)),
                      num_cell(t.multi_hit_fraction)});
  write_file(fs::path(o.out) / "tails.csv", tails);

  std::string measures = csv_row({"T", "zeta", "upper_bound", "upper_bound_num", "covering_bound",
                                  "covering_bound_num", "hits", "n", "monte_carlo", "monte_carlo_num", "half_width",
                                  "within", "within_covering"});
  for (const auto& m : r.measures)
    measures += csv_row({std::to_string(m.T), std::to_string(m.zeta), format_value(m.upper_bound),
                         num_cell(to_double(m.upper_bound.midpoint())),
                         m.covering_bound ? format_value(*m.covering_bound) : "",
                         m.covering_bound ? num_cell(to_double(m.covering_bound->midpoint())) : "",
                         std::to_string(m.hits), std::to_string(m.n), format_rat(m.monte_carlo),
                         num_cell(to_double(m.monte_carlo)), num_cell(m.half_width), m.within ? "true" : "false",
                         m.within_covering ? "true" : "false"});
  write_file(fs::path(o.out) / "measures.csv", measures);

  json rep;
  rep["tool"] = "badlab";
  rep["version"] = kVersion;
  rep["config"] = pc.echo;
  rep["config_hash"] = pc.hash;
  rep["diagnostic"] = diagnostic_json(r.diagnostic);
  if (r.certificate) rep["certificate"] = certificate_json(*r.certificate);
  rep["chart_measure"] = {{"value", format_rat(r.chart.value)},
                          {"value_num", to_double(r.chart.value)},
                          {"exact", r.chart.exact}};
  rep["attempts"] = r.attempts;
  rep["samples"] = r.samples.size();
  rep["zero_gamma"] = r.zero_gamma;
  json zeta = json::array();
  for (std::size_t i = 0; i < r.zeta.size(); ++i)
    zeta.push_back({{"T", c.T_min + static_cast<long>(i)}, {"zeta", r.zeta[i]}});
  rep["zeta"] = zeta;
  json q = json::array();
  for (const auto& g : r.quantiles)
    q.push_back({{"p", g.p}, {"sample", g.sample}, {"gamma", interval_json(g.gamma)}});
  rep["gamma_quantiles"] = q;
  json f = json::array();
  for (const auto& t : r.fractions) f.push_back({{"gamma", format_rat(t.gamma)}, {"fraction_above", t.fraction_above}});
  rep["gamma_fractions"] = f;
  std::size_t within = 0, within_covering = 0;
  for (const auto& m : r.measures) {
    within += m.within;
    within_covering += m.within_covering;
  }
  rep["measures_within"] = within;
  rep["measures_within_covering"] = within_covering;
  rep["measures_checked"] = r.measures.size();
  rep["tail_monotone"] = r.tail_monotone;
  rep["tail_threshold"] = format_rat(kTailThreshold);
  rep["tail_below_threshold_T0"] = r.tail_below_threshold_T0 ? json(*r.tail_below_threshold_T0) : json(nullptr);
  rep["violations"] = r.violations;
  rep["status"] = r.violations.empty() ? "ok" : "violations";
  write_file(fs::path(o.out) / "report.json", dump(rep));

  write_file(fs::path(o.out) / "manifest.json",
             dump(clock.manifest(ctx, "montecarlo", pc, {{"out", o.out}})));

  ctx.out << "montecarlo: " << r.samples.size() << " samples, diagnostic " << to_string(r.diagnostic.verdict)
          << ", status " << rep["status"].get<std::string>() << ", outputs in " << o.out << "\n";
  for (const auto& v : r.violations) ctx.err << "violation: " << v << "\n";
  return r.violations.empty() ? kOk : kViolation;
}

struct VerifyOpts {
  std::string config, gamma, out;
  long T = 0;
  long trials = 100;
  std::optional<std::uint64_t> seed;
};

int cmd_verify(Context& ctx, const VerifyOpts& o) {
  RunClock clock;
  const ParsedConfig pc = parse_config(o.config);
  const ExperimentConfig& c = pc.config;
  if (o.T < 1) throw DomainError("--T must be at least 1");
  if (o.trials < 0) throw DomainError("--trials must be non-negative");

  const GammaChoice g = choose_gamma(pc, o.T, o.gamma, ctx.jobs);
  const OmegaSpec spec{LiftedSpan::lift(c.B), g.gamma, c.psi, c.R, o.T};

  json j;
  j["T"] = o.T;
  j["R"] = format_rat(c.R);
  j["gamma"] = format_rat(g.gamma);
  j["gamma_source"] = g.source;
  if (g.certificate) j["certificate"] = certificate_json(*g.certificate);
  if (g.zero_hit) j["zero_hit"] = *g.zero_hit;

  OmegaCheck omega;
  if (g.certificate && g.certificate->gamma.compare(g.gamma, c.psi) >= 0)
    omega = verify_omega_trivial(*g.certificate, g.gamma, c.R, o.T);
  else
    omega = verify_omega_trivial(spec);
  j["omega_trivial"] = omega.ok;
  j["counterexample"] = omega.counterexample ? json(*omega.counterexample) : json(nullptr);

  bool ok = omega.ok;
  if (omega.ok) {
    const std::uint64_t seed = o.seed.value_or(c.seed);
    const auto translates = random_translates(spec, static_cast<std::size_t>(o.trials), seed);
    const HalfDilationReport h = half_dilation_check(spec, translates, false);
    json hd;
    hd["ok"] = h.ok;
    hd["seed"] = seed;
    hd["translates"] = h.translates;
    hd["max_members"] = h.max_members;
    hd["pairs_checked"] = h.pairs_checked;
    hd["difference_failures"] = h.difference_failures;
    hd["certificate"] = h.certificate;
    if (h.violating_translate) {
      json t = json::array();
      for (const auto& v : *h.violating_translate) t.push_back(format_rat(v));
      hd["violating_translate"] = t;
    }
    if (h.violating_pair) hd["violating_pair"] = {h.violating_pair->first, h.violating_pair->second};
    j["half_dilation"] = hd;
    ok = h.ok && h.difference_failures == 0;
  } else {
    j["half_dilation"] = nullptr;
  }
  j["ok"] = ok;

  if (o.out.empty()) {
    ctx.out << dump(j);
  } else {
    write_file(o.out, dump(j));
    write_file(o.out + ".manifest.json",
               dump(clock.manifest(ctx, "verify", pc,
                                   {{"T", o.T}, {"trials", o.trials}, {"gamma", o.gamma}, {"out", o.out}})));
    ctx.out << (ok ? "verify: ok\n" : "verify: FAILED\n");
  }
  return ok ? kOk : kViolation;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"badlab: exact experiments on badly approximable points of affine subspaces", "badlab"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Context ctx{out, err, 1, args};
  app.add_option("--jobs", ctx.jobs, "Worker threads (outputs do not depend on it)")->check(CLI::Range(1u, 1024u));

  BadnessOpts bo;
  auto* badness = app.add_subcommand("badness", "Height-limited subspace badness certificate");
  badness->add_option("--config", bo.config, "Config file")->required();
  badness->add_option("--target", bo.target, "Subspace: A or B")->check(CLI::IsMember({"A", "B"}));
  badness->add_option("--rate", bo.rate, "Rate: psi or phi")->check(CLI::IsMember({"psi", "phi"}));
  badness->add_option("--height", bo.height, "Scan height (default: certificate.height)");
  badness->add_option("--out", bo.out, "Output JSON file");

  EnumerateOpts eo;
  auto* enumerate = app.add_subcommand("enumerate", "Integer points of Pi_T, Omega_T or Z_T");
  enumerate->add_option("--config", eo.config, "Config file")->required();
  enumerate->add_option("--T", eo.T, "Slab parameter T")->required();
  enumerate->add_option("--set", eo.set, "pi, omega or zeta")->check(CLI::IsMember({"pi", "omega", "zeta"}));
  enumerate->add_option("--gamma", eo.gamma, "gamma for omega, as p/q");
  enumerate->add_option("--out", eo.out, "Output directory");

  SeriesOpts so;
  auto* series = app.add_subcommand("series", "Terms and partial sums of sum mu_T lambda_T");
  series->add_option("--config", so.config, "Config file")->required();
  series->add_option("--N", so.N, "Last index (default: series.N)");
  series->add_option("--lattice-max", so.lattice_max, "Largest T with lattice counts");
  series->add_option("--bits", so.bits, "Interval precision")->check(CLI::Range(64u, 4096u));
  series->add_flag("--diagnostic", so.diagnostic, "Also run the convergence diagnostic");
  series->add_option("--out", so.out, "Output CSV file");

  MonteCarloOpts mo;
  auto* montecarlo = app.add_subcommand("montecarlo", "Sampled badness, U_T hits and tail bounds");
  montecarlo->add_option("--config", mo.config, "Config file")->required();
  montecarlo->add_option("--out", mo.out, "Output directory")->required();

  VerifyOpts vo;
  auto* verify = app.add_subcommand("verify", "Omega_T triviality and the half-dilation packing check");
  verify->add_option("--config", vo.config, "Config file")->required();
  verify->add_option("--T", vo.T, "Slab parameter T")->required();
  verify->add_option("--trials", vo.trials, "Random translates");
  verify->add_option("--gamma", vo.gamma, "gamma as p/q");
  verify->add_option("--seed", vo.seed, "Seed for the translates (default: config seed)");
  verify->add_option("--out", vo.out, "Output JSON file");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kInvalid;
  }

  try {
    if (*badness) return cmd_badness(ctx, bo);
    if (*enumerate) return cmd_enumerate(ctx, eo);
    if (*series) return cmd_series(ctx, so);
    if (*montecarlo) return cmd_montecarlo(ctx, mo);
    if (*verify) return cmd_verify(ctx, vo);
  } catch (const ConfigError& e) {
    err << "invalid config: " << e.what() << "\n";
    return kInvalid;
  } catch (const RefusedError& e) {
    err << "refused: " << e.what() << "\n";
    return kInvalid;
  } catch (const PreconditionError& e) {
    err << "precondition failed: " << e.what() << "\n";
    return kInvalid;
  } catch (const DomainError& e) {
    err << "invalid argument: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kViolation;
  }
  err << app.help();
  return kInvalid;
}

}  // namespace badlab::cli
