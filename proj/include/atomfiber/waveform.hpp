#pragma once

#include <string>
#include <utility>
#include <vector>

#include "atomfiber/vec3.hpp"

namespace atomfiber {

/// Circuit current vs time: constant, piecewise-linear ramp, or
/// I(t) = I0 + Imod sin(omega t + phase).
struct CurrentWaveform {
    enum class Kind { Constant, PiecewiseLinear, Sinusoidal };

    std::string name;
    Kind kind = Kind::Constant;
    double I0 = 0.0;     // [A]
    double Imod = 0.0;   // [A]
    double omega = 0.0;  // [rad/s]
    double phase = 0.0;  // [rad]
    std::vector<std::pair<double, double>> knots;  // (t [s], I [A]), sorted

    double current(double t) const;
    void validate() const;

    static CurrentWaveform constant(std::string name, double I);
    static CurrentWaveform ramp(std::string name, std::vector<std::pair<double, double>> knots);
    static CurrentWaveform sinusoid(std::string name, double I0, double Imod, double omega, double phase);
};

/// Uniform bias field: piecewise-linear magnitude and a direction that
/// rotates by angle alpha(t) from the horizontal axis toward vertical.
struct BiasWaveform {
    std::vector<std::pair<double, double>> magnitude_knots;  // (t, B [T])
    std::vector<std::pair<double, double>> angle_knots;      // (t, alpha [rad])
    Vec3 horizontal_axis{0.0, 1.0, 0.0};
    Vec3 vertical_axis{0.0, 0.0, 1.0};

    double magnitude(double t) const;
    double angle(double t) const;
    Vec3 direction(double t) const;
    Vec3 value(double t) const { return direction(t) * magnitude(t); }

    bool is_static() const { return magnitude_knots.size() <= 1 && angle_knots.size() <= 1; }

    /// Fixed bias vector (no rotation, constant magnitude).
    static BiasWaveform fixed(const Vec3& field);
};

double piecewise_linear(const std::vector<std::pair<double, double>>& knots, double t);

}  // namespace atomfiber
