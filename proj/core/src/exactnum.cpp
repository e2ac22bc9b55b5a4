#include "badlab/exactnum.hpp"

#include <atomic>
#include <cctype>
#include <cstdlib>

namespace badlab {

Rat make_rat(const Int& num, const Int& den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rat parse_rat(std::string_view text) {
  std::string_view s = trim(text);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  std::string_view num = s;
  std::string_view den = "1";
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    num = s.substr(0, slash);
    den = s.substr(slash + 1);
  }
  if (!all_digits(num) || !all_digits(den))
    throw DomainError("not a rational literal \"p/q\": '" + std::string(text) + "'");
  Int n(std::string(num), 10);
  Int d(std::string(den), 10);
  if (negative) n = -n;
  return make_rat(n, d);
}

std::string to_string(const Int& x) { return x.get_str(10); }

std::string to_string(const Rat& x) {
  if (x.get_den() == 1) return x.get_num().get_str(10);
  return x.get_num().get_str(10) + "/" + x.get_den().get_str(10);
}

bool is_canonical(const Rat& x) {
  if (x.get_den() <= 0) return false;
  Int g;
  Int a = abs(x.get_num());
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), x.get_den().get_mpz_t());
  return g == 1;
}

Int floor_int(const Rat& x) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

Int ceil_int(const Rat& x) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

Rat pow_int(const Rat& base, long exponent) {
  if (exponent == 0) return Rat(1);
  if (base == 0) {
    if (exponent < 0) throw DomainError("zero to a negative power");
    return Rat(0);
  }
  unsigned long e = exponent < 0 ? static_cast<unsigned long>(-exponent) : static_cast<unsigned long>(exponent);
  Int n, d;
  mpz_pow_ui(n.get_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(d.get_mpz_t(), base.get_den_mpz_t(), e);
  return exponent < 0 ? make_rat(d, n) : make_rat(n, d);
}

double to_double(const Rat& x) { return x.get_d(); }

std::strong_ordering rat_cmp_power(const Rat& x, const Rat& y, long p, unsigned long q) {
  if (x <= 0 || y <= 0) throw DomainError("rat_cmp_power requires x > 0 and y > 0");
  if (q == 0) throw DomainError("rat_cmp_power requires q >= 1");
  // x <=> y^(p/q)  iff  x^q <=> y^p since t -> t^q is increasing on t > 0.
  Rat lhs = pow_int(x, static_cast<long>(q));
  Rat rhs = pow_int(y, p);
  int c = cmp(lhs, rhs);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

namespace {

unsigned precision_from_env() {
  if (const char* env = std::getenv("BADLAB_PRECISION_BITS")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v >= 32 && v <= 1u << 20) return static_cast<unsigned>(v);
  }
  return 256;
}

std::atomic<unsigned>& precision_cap() {
  static std::atomic<unsigned> cap{precision_from_env()};
  return cap;
}

}  // namespace

unsigned max_precision_bits() { return precision_cap().load(std::memory_order_relaxed); }

void set_max_precision_bits(unsigned bits) {
  if (bits < 32) throw DomainError("precision cap below 32 bits");
  precision_cap().store(bits, std::memory_order_relaxed);
}

std::optional<std::strong_ordering> HPInterval::compare(const Rat& x) const {
  if (x < lo) return std::strong_ordering::less;
  if (x > hi) return std::strong_ordering::greater;
  if (is_point()) return std::strong_ordering::equal;
  return std::nullopt;
}

HPInterval refine_with(const HPInterval& coarse, const HPInterval& fine) {
  HPInterval out;
  out.lo = coarse.lo > fine.lo ? coarse.lo : fine.lo;
  out.hi = coarse.hi < fine.hi ? coarse.hi : fine.hi;
  out.precision_bits = fine.precision_bits > coarse.precision_bits ? fine.precision_bits : coarse.precision_bits;
  if (out.lo > out.hi) throw Error("disjoint enclosures of the same quantity");
  return out;
}

std::string to_string(const HPInterval& x) {
  if (x.is_point()) return to_string(x.lo);
  return "[" + to_string(x.lo) + "," + to_string(x.hi) + "]";
}

}  // namespace badlab
