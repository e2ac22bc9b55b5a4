#pragma once

// Rational stand-ins for the irrational points used in experiments:
// floor(x * 10^60) / 10^60, so each coordinate is within epsilon = 10^-60
// below the true value.

#include <string>
#include <string_view>
#include <vector>

#include "badlab/geometry.hpp"

namespace badlab {

struct Preset {
  std::string name;
  RatVec value;
  Rat epsilon;
  std::string description;
};

/// Throws DomainError for unknown names.
const Preset& preset(std::string_view name);
const std::vector<Preset>& all_presets();

}  // namespace badlab
