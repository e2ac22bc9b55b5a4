#include "badlab/presets.hpp"

namespace badlab {

namespace {

Rat digits60(const char* numerator) {
  Int den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, 60);
  return make_rat(Int(numerator), den);
}

std::vector<Preset> build() {
  const Rat eps = digits60("1");
  const Rat golden = digits60("1618033988749894848204586834365638117720309179805762862135448");
  const Rat sqrt2 = digits60("1414213562373095048801688724209698078569671875376948073176679");
  const Rat cbrt2 = digits60("1259921049894873164767210607278228350570251464701507980081975");
  const Rat cbrt4 = digits60("1587401051968199474751705639272308260391493327899853009808285");
  return {
      {"golden", {golden}, eps, "(1 + sqrt 5) / 2"},
      {"sqrt2", {sqrt2}, eps, "sqrt 2"},
      {"cbrt2", {cbrt2}, eps, "2^(1/3)"},
      {"cbrt4", {cbrt4}, eps, "2^(2/3)"},
      {"cbrt2_pair", {cbrt2, cbrt4}, eps, "(2^(1/3), 2^(2/3))"},
  };
}

}  // namespace

const std::vector<Preset>& all_presets() {
  static const std::vector<Preset> presets = build();
  return presets;
}

const Preset& preset(std::string_view name) {
  for (const auto& p : all_presets())
    if (p.name == name) return p;
  throw DomainError("unknown preset '" + std::string(name) + "'");
}

}  // namespace badlab
