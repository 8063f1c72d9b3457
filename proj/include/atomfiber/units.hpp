#pragma once

#include <string>

namespace atomfiber {

/// Parse a "value unit" string (e.g. "50 G", "115 um", "1.6 s") into SI.
/// Unit conversion happens only here and in format_quantity; everything
/// between module interfaces is SI.
double parse_quantity(const std::string& text);

/// Parse and require a specific dimension ("length", "time", "current",
/// "field", "temperature", "frequency", "angle", "none").
double parse_quantity(const std::string& text, const std::string& dimension);

/// Format an SI value in the given unit with enough digits to round-trip.
std::string format_quantity(double si_value, const std::string& unit);

/// Exact conversion factor from unit to SI. Throws on unknown units.
double unit_factor(const std::string& unit);

/// Dimension name for a unit ("length", "time", ...).
std::string unit_dimension(const std::string& unit);

}  // namespace atomfiber
