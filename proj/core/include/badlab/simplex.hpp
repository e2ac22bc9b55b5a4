#pragma once

// Dense two-phase simplex over exact rationals with Bland's rule.
//
//   maximize c.x  subject to  A x <= b,  x >= 0
//
// Intended for the small instances that arise here (a few dozen rows and
// columns); it never cycles and never rounds.

#include <vector>

#include "badlab/exactnum.hpp"

namespace badlab {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rat value;
  std::vector<Rat> x;
};

LpResult solve_lp(const std::vector<std::vector<Rat>>& a, const std::vector<Rat>& b, const std::vector<Rat>& c);

}  // namespace badlab
