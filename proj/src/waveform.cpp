#include "atomfiber/waveform.hpp"

#include <algorithm>
#include <cmath>

#include "atomfiber/constants.hpp"

namespace atomfiber {

double piecewise_linear(const std::vector<std::pair<double, double>>& knots, double t) {
    if (knots.empty()) return 0.0;
    if (t <= knots.front().first) return knots.front().second;
    if (t >= knots.back().first) return knots.back().second;
    auto it = std::upper_bound(knots.begin(), knots.end(), t,
                               [](double v, const std::pair<double, double>& k) { return v < k.first; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double f = (t - lo.first) / (hi.first - lo.first);
    return lo.second + f * (hi.second - lo.second);
}

double CurrentWaveform::current(double t) const {
    switch (kind) {
        case Kind::Constant:
            return I0;
        case Kind::PiecewiseLinear:
            return piecewise_linear(knots, t);
        case Kind::Sinusoidal:
            return I0 + Imod * std::sin(omega * t + phase);
    }
    return 0.0;
}

void CurrentWaveform::validate() const {
    if (name.empty()) throw Error("CurrentWaveform: empty name");
    if (kind == Kind::Sinusoidal && !(omega > 0.0))
        throw Error("CurrentWaveform '" + name + "': sinusoidal modulation requires omega > 0");
    if (kind == Kind::PiecewiseLinear) {
        if (knots.empty()) throw Error("CurrentWaveform '" + name + "': ramp needs at least one knot");
        for (std::size_t i = 1; i < knots.size(); ++i)
            if (!(knots[i].first > knots[i - 1].first))
                throw Error("CurrentWaveform '" + name + "': ramp knots must be strictly increasing in time");
    }
}

CurrentWaveform CurrentWaveform::constant(std::string name, double I) {
    CurrentWaveform w;
    w.name = std::move(name);
    w.kind = Kind::Constant;
    w.I0 = I;
    return w;
}

CurrentWaveform CurrentWaveform::ramp(std::string name, std::vector<std::pair<double, double>> knots) {
    CurrentWaveform w;
    w.name = std::move(name);
    w.kind = Kind::PiecewiseLinear;
    w.knots = std::move(knots);
    w.validate();
    return w;
}

CurrentWaveform CurrentWaveform::sinusoid(std::string name, double I0, double Imod, double omega, double phase) {
    CurrentWaveform w;
    w.name = std::move(name);
    w.kind = Kind::Sinusoidal;
    w.I0 = I0;
    w.Imod = Imod;
    w.omega = omega;
    w.phase = phase;
    w.validate();
    return w;
}

double BiasWaveform::magnitude(double t) const { return piecewise_linear(magnitude_knots, t); }

double BiasWaveform::angle(double t) const { return piecewise_linear(angle_knots, t); }

Vec3 BiasWaveform::direction(double t) const {
    const double a = angle(t);
    return normalized(horizontal_axis * std::cos(a) + vertical_axis * std::sin(a));
}

BiasWaveform BiasWaveform::fixed(const Vec3& field) {
    BiasWaveform b;
    const double mag = norm(field);
    b.magnitude_knots = {{0.0, mag}};
    b.angle_knots = {{0.0, 0.0}};
    b.horizontal_axis = mag > 0.0 ? normalized(field) : Vec3{0.0, 1.0, 0.0};
    b.vertical_axis = Vec3{0.0, 0.0, 1.0};
    if (std::abs(dot(b.horizontal_axis, b.vertical_axis)) > 0.999) b.vertical_axis = Vec3{0.0, 1.0, 0.0};
    return b;
}

}  // namespace atomfiber
