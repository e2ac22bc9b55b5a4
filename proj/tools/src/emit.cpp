#include "emit.hpp"

#include <ctime>
#include <fstream>

namespace badlab::cli {

std::string format_rat(const Rat& x) {
  const Int& den = x.get_den();
  if (den > 1) {
    const auto k = mpz_scan1(den.get_mpz_t(), 0);
    if (k >= 8 && mpz_sizeinbase(den.get_mpz_t(), 2) == k + 1)
      return to_string(x.get_num()) + "/2^" + std::to_string(k);
  }
  return to_string(x);
}

std::string format_value(const HPInterval& x) {
  if (x.is_point()) return format_rat(x.lo);
  return "[" + format_rat(x.lo) + "," + format_rat(x.hi) + "]";
}

std::string format_value(const RateValue& v) {
  if (const Rat* r = std::get_if<Rat>(&v)) return format_rat(*r);
  return format_value(std::get<HPInterval>(v));
}

Rat parse_cell_rat(std::string_view s) {
  const auto caret = s.find("/2^");
  if (caret == std::string_view::npos) return parse_rat(s);
  const Rat num = parse_rat(s.substr(0, caret));
  const std::string k(s.substr(caret + 3));
  if (k.empty() || k.find_first_not_of("0123456789") != std::string::npos)
    throw DomainError("malformed dyadic '" + std::string(s) + "'");
  Int den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, std::stoul(k));
  return make_rat(num.get_num(), den);
}

HPInterval parse_cell_interval(std::string_view s) {
  if (s.size() >= 2 && s.front() == '[' && s.back() == ']') {
    const auto comma = s.find(',');
    if (comma == std::string_view::npos) throw DomainError("malformed interval '" + std::string(s) + "'");
    return HPInterval{parse_cell_rat(s.substr(1, comma - 1)), parse_cell_rat(s.substr(comma + 1, s.size() - comma - 2))};
  }
  return HPInterval::point(parse_cell_rat(s));
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string csv_row(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + csv_cell(cells[i]);
  return out + "\n";
}

std::string point_string(const LatticePoint& z) {
  std::string out = "(";
  for (std::size_t i = 0; i < z.size(); ++i) out += (i ? "," : "") + std::to_string(z[i]);
  return out + ")";
}

std::string iso_utc(std::chrono::system_clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace badlab::cli
