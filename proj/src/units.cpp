#include "atomfiber/units.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "atomfiber/constants.hpp"

namespace atomfiber {

namespace {

struct UnitEntry {
    const char* name;
    double factor;  // multiply parsed value by this to get SI
    const char* dimension;
};

// Factors are definitional (1 G = 1e-4 T etc.), kept exact.
constexpr std::array<UnitEntry, 28> kUnits{{
    {"m", 1.0, "length"},
    {"cm", 1e-2, "length"},
    {"mm", 1e-3, "length"},
    {"um", 1e-6, "length"},
    {"nm", 1e-9, "length"},
    {"s", 1.0, "time"},
    {"ms", 1e-3, "time"},
    {"us", 1e-6, "time"},
    {"ns", 1e-9, "time"},
    {"A", 1.0, "current"},
    {"mA", 1e-3, "current"},
    {"uA", 1e-6, "current"},
    {"T", 1.0, "field"},
    {"mT", 1e-3, "field"},
    {"uT", 1e-6, "field"},
    {"G", 1e-4, "field"},
    {"mG", 1e-7, "field"},
    {"K", 1.0, "temperature"},
    {"mK", 1e-3, "temperature"},
    {"uK", 1e-6, "temperature"},
    {"nK", 1e-9, "temperature"},
    {"Hz", 1.0, "frequency"},
    {"kHz", 1e3, "frequency"},
    {"MHz", 1e6, "frequency"},
    {"rad", 1.0, "angle"},
    {"deg", 0.017453292519943295, "angle"},  // pi/180
    {"1", 1.0, "none"},
    {"", 1.0, "none"},
}};

const UnitEntry* find_unit(const std::string& unit) {
    for (const auto& e : kUnits) {
        if (unit == e.name) return &e;
    }
    return nullptr;
}

}  // namespace

double unit_factor(const std::string& unit) {
    const UnitEntry* e = find_unit(unit);
    if (!e) throw Error("unknown unit '" + unit + "'");
    return e->factor;
}

std::string unit_dimension(const std::string& unit) {
    const UnitEntry* e = find_unit(unit);
    if (!e) throw Error("unknown unit '" + unit + "'");
    return e->dimension;
}

double parse_quantity(const std::string& text) {
    // number, optional whitespace, optional unit token
    size_t i = 0;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    const char* begin = text.c_str() + i;
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin) throw Error("malformed quantity '" + text + "'");
    size_t j = static_cast<size_t>(end - text.c_str());
    while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    std::string unit = text.substr(j);
    while (!unit.empty() && std::isspace(static_cast<unsigned char>(unit.back()))) unit.pop_back();
    if (!std::isfinite(value)) throw Error("non-finite quantity '" + text + "'");
    return value * unit_factor(unit);
}

double parse_quantity(const std::string& text, const std::string& dimension) {
    size_t i = 0;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    const char* begin = text.c_str() + i;
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin) throw Error("malformed quantity '" + text + "'");
    size_t j = static_cast<size_t>(end - text.c_str());
    while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    std::string unit = text.substr(j);
    while (!unit.empty() && std::isspace(static_cast<unsigned char>(unit.back()))) unit.pop_back();
    if (unit_dimension(unit) != dimension) {
        throw Error("quantity '" + text + "' is not a " + dimension);
    }
    if (!std::isfinite(value)) throw Error("non-finite quantity '" + text + "'");
    return value * unit_factor(unit);
}

std::string format_quantity(double si_value, const std::string& unit) {
    const double v = si_value / unit_factor(unit);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    std::string out(buf);
    if (!unit.empty()) {
        out += ' ';
        out += unit;
    }
    return out;
}

}  // namespace atomfiber
