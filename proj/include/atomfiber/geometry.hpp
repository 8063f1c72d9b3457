#pragma once

#include <string>
#include <vector>

#include "atomfiber/vec3.hpp"

namespace atomfiber {

struct WireSegment {
    Vec3 start;
    Vec3 end;
};

/// Connected polyline carrying one named current. Cross-section is metadata
/// only; fields are computed in the line-current approximation.
struct WireCircuit {
    std::string name;
    std::vector<WireSegment> segments;
    double cross_width = 45e-6;   // [m]
    double cross_height = 5e-6;   // [m]
    std::string waveform_ref;     // name of the bound current waveform

    double length() const;
};

struct WireLayout {
    std::vector<WireCircuit> circuits;

    std::size_t segment_count() const;
    const WireCircuit* find(const std::string& name) const;
};

/// Centerline of a guide with cumulative arclength per point.
struct GuidePath {
    std::vector<Vec3> points;
    std::vector<double> arclength;  // same size, strictly increasing from 0

    double length() const { return arclength.empty() ? 0.0 : arclength.back(); }
    Vec3 point_at(double s) const;
    Vec3 tangent_at(double s) const;

    static GuidePath from_points(std::vector<Vec3> pts);
};

struct SpiralSpec {
    double inner_radius = 200e-6;   // [m]
    double outer_radius = 3e-3;     // [m]
    double path_length = 25e-3;     // [m]
    double half_separation = 57.5e-6;  // d [m]
    double plane_z = 0.0;           // wire plane height [m]
    int resolution = 512;           // centerline points per turn
    double lead_length = 5e-3;      // straight lead to the pads [m]
    double lead_angle = 0.7853981633974483;  // lead splay from the backward tangent [rad]

    void validate() const;
};

/// Archimedean spiral r(theta) = a + b*theta solved so that r spans
/// [inner, outer] and the arc length matches; see build_spiral_pair.
struct SpiralSolution {
    double a = 0.0;       // inner radius [m]
    double b = 0.0;       // growth rate [m/rad]
    double theta_max = 0.0;
    double turns() const { return theta_max / (2.0 * 3.14159265358979323846); }
};

SpiralSolution solve_spiral(double inner_radius, double outer_radius, double path_length);

/// Closed-form Archimedean arc length between theta0 and theta1.
double spiral_arclength(const SpiralSolution& sp, double theta0, double theta1);

/// Two-wire spiral guide: a single circuit running pad -> outer arm inward
/// -> inner U-turn -> other arm outward -> pad, so one bound current gives
/// counter-propagating flow in the two arms. The returned path is the
/// centerline between the arms with s = 0 at the outer end.
struct SpiralPair {
    WireCircuit circuit;
    GuidePath path;
    SpiralSolution spiral;
};

SpiralPair build_spiral_pair(const SpiralSpec& spec);

/// Two parallel arms along x at y = +-d joined at x = 0; centerline at y = 0.
struct StraightPair {
    WireCircuit circuit;
    GuidePath path;
};

StraightPair build_straight_pair(double length, double half_separation, double plane_z);

/// Layout sanity report; passes iff no findings.
struct LayoutReport {
    std::vector<std::string> findings;
    bool pass() const { return findings.empty(); }
};

LayoutReport validate_layout(const WireLayout& layout);

/// Plain-text geometry file, one segment per line:
///   circuit_name x1 y1 z1 x2 y2 z2   (meters)
/// Round-trips bit-exactly.
void save_layout(const WireLayout& layout, const std::string& path);
WireLayout load_layout(const std::string& path);

/// Distance from a point to a segment.
double segment_distance(const Vec3& p, const Vec3& a, const Vec3& b);

}  // namespace atomfiber
