#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "badlab/presets.hpp"

namespace badlab::cli {

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

const std::map<std::string, std::string>& defaults() {
  static const std::map<std::string, std::string> d = {
      {"A.directions", ""},
      {"B.directions", ""},
      {"psi.c", "1"},
      {"psi.delta", "0"},
      {"psi.T0", "2"},
      {"phi.c", "1"},
      {"phi.delta", "0"},
      {"phi.T0", "2"},
      {"R", "1"},
      {"samples", "100"},
      {"X", "100000"},
      {"T_min", "2"},
      {"T_max", "256"},
      {"seed", "42"},
      {"rng", Philox::kName},
      {"series.N", "100000"},
      {"series.rounds", "2"},
      {"gamma_grid", ""},
      {"gamma", ""},
      {"certificate.height", ""},
  };
  return d;
}

const std::set<std::string>& required() {
  static const std::set<std::string> r = {"A.point", "B.point", "psi.kind", "psi.alpha", "phi.kind", "phi.alpha"};
  return r;
}

Rat rat_value(const std::string& key, const std::string& v) {
  try {
    return parse_rat(v);
  } catch (const Error& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

long long_value(const std::string& key, const std::string& v) {
  Rat r = rat_value(key, v);
  if (r.get_den() != 1 || !r.get_num().fits_slong_p()) throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return r.get_num().get_si();
}

// Normalizes a point: a preset name, or comma-separated rationals.
std::string norm_vector(const std::string& key, const std::string& v) {
  std::string t = trim(v);
  if (t.empty()) throw ConfigError(key + ": empty vector");
  if (std::isalpha(static_cast<unsigned char>(t[0]))) {
    try {
      preset(t);
    } catch (const DomainError& e) {
      throw ConfigError(key + ": " + e.what());
    }
    return t;
  }
  std::string out;
  for (const auto& part : split(t, ',')) out += (out.empty() ? "" : ", ") + to_string(rat_value(key, part));
  return out;
}

RatVec vector_value(const std::string& norm) {
  if (std::isalpha(static_cast<unsigned char>(norm[0]))) return preset(norm).value;
  RatVec out;
  for (const auto& part : split(norm, ',')) out.push_back(parse_rat(part));
  return out;
}

std::string norm_vector_list(const std::string& key, const std::string& v) {
  std::string t = trim(v);
  if (t.empty()) return "";
  std::string out;
  for (const auto& part : split(t, ';')) out += (out.empty() ? "" : "; ") + norm_vector(key, part);
  return out;
}

std::vector<RatVec> vector_list_value(const std::string& norm) {
  std::vector<RatVec> out;
  if (norm.empty()) return out;
  for (const auto& part : split(norm, ';')) out.push_back(vector_value(part));
  return out;
}

std::string norm_rat_list(const std::string& key, const std::string& v) {
  std::string t = trim(v);
  if (t.empty()) return "";
  std::string out;
  for (const auto& part : split(t, ',')) out += (out.empty() ? "" : ", ") + to_string(rat_value(key, part));
  return out;
}

std::string norm_kind(const std::string& key, const std::string& v) {
  std::string t = trim(v);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (t != "powerlaw" && t != "powerlog") throw ConfigError(key + ": expected powerlaw or powerlog, got '" + v + "'");
  return t;
}

RateFunction rate_value(const std::map<std::string, std::string>& e, const std::string& prefix) {
  const std::string kind = e.at(prefix + ".kind");
  const Rat c = parse_rat(e.at(prefix + ".c"));
  const Rat alpha = parse_rat(e.at(prefix + ".alpha"));
  const Rat delta = parse_rat(e.at(prefix + ".delta"));
  const Rat t0 = parse_rat(e.at(prefix + ".T0"));
  try {
    if (kind == "powerlaw") {
      if (delta != 0) throw ConfigError(prefix + ".delta must be 0 for powerlaw");
      return RateFunction::power_law(c, alpha);
    }
    return RateFunction::power_log(c, alpha, delta, t0);
  } catch (const DomainError& err) {
    throw ConfigError(prefix + ": " + err.what());
  }
}

AffineSubspace subspace_value(const std::map<std::string, std::string>& e, const std::string& prefix) {
  try {
    return AffineSubspace(vector_value(e.at(prefix + ".point")), vector_list_value(e.at(prefix + ".directions")));
  } catch (const DomainError& err) {
    throw ConfigError(prefix + ": " + err.what());
  }
}

}  // namespace

std::string config_hash(const std::map<std::string, std::string>& echo) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const auto& [k, v] : echo) {
    for (char ch : k + "=" + v + "\n") {
      h ^= static_cast<unsigned char>(ch);
      h *= 0x100000001b3ull;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ParsedConfig parse_config_map(const std::map<std::string, std::string>& raw) {
  std::map<std::string, std::string> e = defaults();
  for (const auto& [k, v] : raw) {
    if (!defaults().count(k) && !required().count(k)) throw ConfigError("unknown key '" + k + "'");
    e[k] = trim(v);
  }
  for (const auto& k : required())
    if (!e.count(k) || e[k].empty()) throw ConfigError("missing required key '" + k + "'");

  for (const char* k : {"A.point", "B.point"}) e[k] = norm_vector(k, e[k]);
  for (const char* k : {"A.directions", "B.directions"}) e[k] = norm_vector_list(k, e[k]);
  for (const char* k : {"psi.kind", "phi.kind"}) e[k] = norm_kind(k, e[k]);
  for (const char* k : {"psi.c", "psi.alpha", "psi.delta", "psi.T0", "phi.c", "phi.alpha", "phi.delta", "phi.T0", "R"})
    e[k] = to_string(rat_value(k, e[k]));
  for (const char* k : {"samples", "X", "T_min", "T_max", "series.N", "series.rounds"})
    e[k] = std::to_string(long_value(k, e[k]));
  e["gamma_grid"] = norm_rat_list("gamma_grid", e["gamma_grid"]);
  if (!e["gamma"].empty()) e["gamma"] = to_string(rat_value("gamma", e["gamma"]));
  {
    const std::string s = e["seed"];
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char ch) { return std::isdigit(ch); }) ||
        s.size() > 20)
      throw ConfigError("seed: expected an unsigned 64-bit integer");
    try {
      std::stoull(s);
    } catch (const std::exception&) {
      throw ConfigError("seed: expected an unsigned 64-bit integer");
    }
    e["seed"] = std::to_string(std::stoull(s));
  }
  const Rat R = parse_rat(e["R"]);
  if (e["certificate.height"].empty())
    e["certificate.height"] = to_string(ceil_int(R * parse_rat(e["T_max"])));
  else
    e["certificate.height"] = std::to_string(long_value("certificate.height", e["certificate.height"]));

  RateFunction psi = rate_value(e, "psi");
  RateFunction phi = rate_value(e, "phi");
  AffineSubspace A = subspace_value(e, "A");
  AffineSubspace B = subspace_value(e, "B");
  ExperimentConfig c{A, B, psi, phi, R, 0, 100, 100000, 2, 256, 42, Philox::kName, 100000, 2, {}, 1};
  c.certificate_height = parse_rat(e["certificate.height"]).get_num().get_si();
  c.sample_count = std::stol(e["samples"]);
  c.X = std::stol(e["X"]);
  c.T_min = std::stol(e["T_min"]);
  c.T_max = std::stol(e["T_max"]);
  c.seed = std::stoull(e["seed"]);
  c.rng = e["rng"];
  c.series_N = std::stol(e["series.N"]);
  const long rounds = std::stol(e["series.rounds"]);
  if (rounds < 2 || rounds > 8) throw ConfigError("series.rounds must be between 2 and 8");
  c.series_rounds = static_cast<unsigned>(rounds);
  if (!e["gamma_grid"].empty())
    for (const auto& part : split(e["gamma_grid"], ',')) c.gamma_grid.push_back(parse_rat(part));

  try {
    validate(c);
  } catch (const PreconditionError& err) {
    throw ConfigError(err.what());
  }

  ParsedConfig out{std::move(c), e, std::nullopt, ""};
  if (!e["gamma"].empty()) {
    out.gamma = parse_rat(e["gamma"]);
    if (*out.gamma <= 0) throw ConfigError("gamma must be positive");
  }
  out.hash = config_hash(out.echo);
  return out;
}

ParsedConfig parse_config_text(const std::string& text) {
  std::map<std::string, std::string> raw;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    if (raw.count(key)) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    raw[key] = trim(line.substr(eq + 1));
  }
  return parse_config_map(raw);
}

ParsedConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("invalid JSON config: ") + e.what());
    }
    const nlohmann::json& obj = j.contains("config") ? j["config"] : j;
    std::map<std::string, std::string> raw;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (!it.value().is_string()) throw ConfigError("JSON config value for '" + it.key() + "' must be a string");
      raw[it.key()] = it.value().get<std::string>();
    }
    return parse_config_map(raw);
  }
  return parse_config_text(text);
}

}  // namespace badlab::cli
