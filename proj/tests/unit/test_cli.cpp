#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "config.hpp"
#include "emit.hpp"
#include "oracles.hpp"

using namespace badlab;
using namespace badlab::cli;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = fs::path(BADLAB_SOURCE_DIR) / "configs";

const std::string kSmall = R"(# short cubic pair run
A.point = cbrt2_pair
A.directions = 1, 1
B.point = cbrt2_pair
psi.kind = powerlaw
psi.alpha = 1/2
phi.kind = powerlog
phi.alpha = 1/2
phi.delta = 2
phi.T0 = 3
R = 2
T_min = 2
T_max = 20
samples = 100
X = 2000
series.N = 1000
gamma_grid = 1/100, 1/10
)";

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("badlab_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  fs::path p = dir / "run.cfg";
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

std::string config_error(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("config errors cite the broken rule") {
  CHECK(config_error(kSmall).empty());
  CHECK(config_error(kSmall + "colour = red\n").find("colour") != std::string::npos);
  CHECK(config_error(kSmall + "R = 2\n").find("R") != std::string::npos);
  CHECK_FALSE(config_error(kSmall + "X = 0.5\n").empty());

  std::string no_b = kSmall;
  no_b.replace(no_b.find("B.point"), std::string("B.point = cbrt2_pair").size(), "");
  CHECK(config_error(no_b).find("B.point") != std::string::npos);

  CHECK(config_error(kSmall + "B.directions = 1, 1\n").find("dim B < a") != std::string::npos);

  std::string hot = kSmall;
  hot.replace(hot.find("phi.delta = 2"), 13, "phi.delta = 0");
  hot += "phi.c = 2\n";
  CHECK(config_error(hot).find("phi(T) <= psi(T)") != std::string::npos);

  std::string decimal = kSmall;
  decimal.replace(decimal.find("psi.alpha = 1/2"), 15, "psi.alpha = 0.5");
  CHECK_FALSE(config_error(decimal).empty());
}

TEST_CASE("config hash is stable and order independent") {
  const auto a = parse_config_text(kSmall);
  const auto b = parse_config_text(kSmall);
  CHECK(a.hash == b.hash);
  CHECK(a.hash.size() == 16);

  std::istringstream in(kSmall);
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  std::reverse(lines.begin(), lines.end());
  std::string reversed;
  for (const auto& l : lines) reversed += l + "\n";
  CHECK(parse_config_text(reversed).hash == a.hash);

  // Spelling a default out does not change the config.
  CHECK(parse_config_text(kSmall + "seed = 42\n").hash == a.hash);
  CHECK(parse_config_text(kSmall + "seed = 43\n").hash != a.hash);

  CHECK(parse_config(kConfigs / "golden.cfg").hash == parse_config(kConfigs / "golden.cfg").hash);
  CHECK(config_hash(a.echo) == a.hash);
}

TEST_CASE("rational cells parse back exactly") {
  testing::Gen g(71);
  for (int i = 0; i < 2000; ++i) {
    Rat x = g.rat(1000000, 999983);
    if (g.coin()) x = make_rat(Int(g.integer(-(1L << 40), 1L << 40)), Int(1) << static_cast<unsigned>(g.integer(0, 70)));
    const std::string s = format_rat(x);
    REQUIRE(parse_cell_rat(s) == x);
    const HPInterval iv{x, x + g.positive_rat(5, 1000), 64};
    const HPInterval back = parse_cell_interval(format_value(iv));
    REQUIRE(back.lo == iv.lo);
    REQUIRE(back.hi == iv.hi);
  }
  CHECK(format_rat(Rat(3, 256)) == "3/2^8");
  CHECK(format_rat(Rat(3, 128)) == "3/128");
  CHECK(parse_cell_interval("7/3").is_point());
  CHECK(csv_cell("a,b") == "\"a,b\"");
  CHECK(csv_row({"1", "x,y"}) == "1,\"x,y\"\n");
}

TEST_CASE("exit codes") {
  CHECK(run_cli({"nosuch"}).code == kInvalid);
  CHECK(run_cli({}).code == kInvalid);
  CHECK(run_cli({"badness", "--config", "/nonexistent/x.cfg"}).code == kInvalid);

  const fs::path dir = scratch("exit");
  const fs::path bad = write_config(dir, kSmall + "B.directions = 1, 1\n");
  Run r = run_cli({"series", "--config", bad.string()});
  CHECK(r.code == kInvalid);
  CHECK(r.err.find("dim B < a") != std::string::npos);

  const fs::path refuse = write_config(dir, [] {
    std::string t = kSmall;
    t.replace(t.find("phi.delta = 2"), 13, "phi.delta = 1/2");
    return t;
  }());
  CHECK(run_cli({"montecarlo", "--config", refuse.string(), "--out", (dir / "mc").string()}).code == kInvalid);
}

TEST_CASE("verify and badness on the golden config") {
  Run v = run_cli({"verify", "--config", (kConfigs / "golden.cfg").string(), "--T", "100"});
  REQUIRE(v.code == kOk);
  auto j = nlohmann::json::parse(v.out);
  CHECK(j["ok"] == true);
  CHECK(j["omega_trivial"] == true);
  CHECK(j["half_dilation"]["max_members"].get<int>() <= 1);

  Run b = run_cli({"badness", "--config", (kConfigs / "golden.cfg").string(), "--target", "B", "--rate", "psi",
                   "--height", "200"});
  REQUIRE(b.code == kOk);
  auto jb = nlohmann::json::parse(b.out);
  CHECK(jb["outcome"] == "certificate");
  CHECK(jb["witness"] == nlohmann::json::array({1, 1}));
  CHECK(jb["height"] == 200);
}

TEST_CASE("series CSV header and cells") {
  const fs::path dir = scratch("series");
  const fs::path cfg = write_config(dir, kSmall);
  Run r = run_cli({"series", "--config", cfg.string(), "--N", "60", "--lattice-max", "10"});
  REQUIRE(r.code == kOk);
  std::istringstream in(r.out);
  std::string header;
  std::getline(in, header);
  CHECK(header == "T,mu,lambda,term,partial_sum,zeta,pi_count,ratio_int,ratio_cumzeta");
  std::string row;
  int rows = 0;
  HPInterval prev{Rat(-1), Rat(-1), 0};
  while (std::getline(in, row)) {
    ++rows;
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (char ch : row) {
      if (ch == '"') quoted = !quoted;
      else if (ch == ',' && !quoted) {
        cells.push_back(cell);
        cell.clear();
      } else cell += ch;
    }
    cells.push_back(cell);
    REQUIRE(cells.size() == 9);
    HPInterval s = parse_cell_interval(cells[4]);
    REQUIRE(s.lo > prev.hi);
    prev = s;
    const long T = std::stol(cells[0]);
    REQUIRE(cells[5].empty() == (T > 10));
  }
  CHECK(rows > 50);
}

TEST_CASE("montecarlo report round-trips its config hash and ignores --jobs") {
  const fs::path dir = scratch("mc");
  const fs::path cfg = write_config(dir, kSmall);
  Run one = run_cli({"montecarlo", "--config", cfg.string(), "--out", (dir / "one").string()});
  REQUIRE(one.code == kOk);
  Run two = run_cli({"--jobs", "2", "montecarlo", "--config", cfg.string(), "--out", (dir / "two").string()});
  REQUIRE(two.code == kOk);
  for (const char* f : {"report.json", "samples.csv", "tails.csv", "measures.csv"})
    CHECK(slurp(dir / "one" / f) == slurp(dir / "two" / f));

  const auto parsed = parse_config_text(kSmall);
  CHECK(parse_config(dir / "one" / "report.json").hash == parsed.hash);
  auto report = nlohmann::json::parse(slurp(dir / "one" / "report.json"));
  CHECK(report["config_hash"] == parsed.hash);
  auto manifest = nlohmann::json::parse(slurp(dir / "one" / "manifest.json"));
  CHECK(manifest["config_hash"] == parsed.hash);
  std::map<std::string, std::string> echo;
  for (auto& [k, v] : manifest["config"].items()) echo[k] = v.get<std::string>();
  CHECK(config_hash(echo) == parsed.hash);

  // Sample coordinates parse back onto A inside the ball.
  std::istringstream in(slurp(dir / "one" / "samples.csv"));
  std::string line;
  std::getline(in, line);
  int n = 0;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    RatVec w{parse_cell_rat(cells[2]), parse_cell_rat(cells[3])};
    REQUIRE(parsed.config.A.contains(w));
    REQUIRE(sup_norm(w) <= 2);
    ++n;
  }
  CHECK(n == 100);
}
