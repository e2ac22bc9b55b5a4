#pragma once

#include "badlab/rates.hpp"
#include "mpfr_util.hpp"

namespace badlab::detail {

/// Enclosure of f over an argument enclosure t (t inside f's domain).
Bounds rate_bounds(const RateFunction& f, const Bounds& t);

}  // namespace badlab::detail
