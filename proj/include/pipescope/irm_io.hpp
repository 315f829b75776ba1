#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "pipescope/irm.hpp"

namespace pipescope {

/// Shortest decimal text that parses back to the same double.
std::string format_number(double value);
/// Strict parse of a whole field; throws ParseError.
double parse_number(std::string_view text);

/// Text format: one JSON header line (dt, n samples, horizon, leaves, direct,
/// sparse), a CSV header `i,j,t,k`, then one row per sample with 0-based leaf
/// indices and t = n dt. Sparse files omit zero samples.
void write_irm(std::ostream& os, const SampledIRM& irm, bool sparse = false);
void write_irm(const std::string& path, const SampledIRM& irm, bool sparse = false);

/// Inverse of write_irm; bit-exact for anything write_irm produced.
SampledIRM read_irm(std::istream& is);
SampledIRM read_irm(const std::string& path);

}  // namespace pipescope
