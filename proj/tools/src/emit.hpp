#pragma once

// Text forms for output files. Every numeric cell parses back to the exact
// value that was written: rationals as "p/q", dyadics with a large
// denominator as "p/2^k", enclosures as "[lo,hi]".

#include <chrono>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "badlab/exactnum.hpp"
#include "badlab/geometry.hpp"
#include "badlab/rates.hpp"

namespace badlab::cli {

/// "p/2^k" when the denominator is 2^k with k >= 8, else to_string.
std::string format_rat(const Rat& x);
std::string format_value(const HPInterval& x);
std::string format_value(const RateValue& v);

/// Inverse of format_rat.
Rat parse_cell_rat(std::string_view s);
/// Inverse of format_value; a bare rational parses as a point interval.
HPInterval parse_cell_interval(std::string_view s);

/// Quotes a cell holding a comma or a quote.
std::string csv_cell(const std::string& s);
std::string csv_row(const std::vector<std::string>& cells);

std::string point_string(const LatticePoint& z);

std::string iso_utc(std::chrono::system_clock::time_point t);

/// Writes bytes with LF line endings exactly as given.
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace badlab::cli
