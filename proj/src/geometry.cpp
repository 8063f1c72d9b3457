#include "atomfiber/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "atomfiber/constants.hpp"

namespace atomfiber {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double WireCircuit::length() const {
    double total = 0.0;
    for (const auto& s : segments) total += norm(s.end - s.start);
    return total;
}

std::size_t WireLayout::segment_count() const {
    std::size_t n = 0;
    for (const auto& c : circuits) n += c.segments.size();
    return n;
}

const WireCircuit* WireLayout::find(const std::string& name) const {
    for (const auto& c : circuits) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

GuidePath GuidePath::from_points(std::vector<Vec3> pts) {
    if (pts.size() < 2) throw Error("GuidePath: need at least two points");
    GuidePath p;
    p.points = std::move(pts);
    p.arclength.resize(p.points.size());
    p.arclength[0] = 0.0;
    for (std::size_t i = 1; i < p.points.size(); ++i) {
        const double step = norm(p.points[i] - p.points[i - 1]);
        if (!(step > 0.0)) throw Error("GuidePath: repeated point at index " + std::to_string(i));
        p.arclength[i] = p.arclength[i - 1] + step;
    }
    return p;
}

Vec3 GuidePath::point_at(double s) const {
    if (points.size() < 2) throw Error("GuidePath: empty path");
    s = std::clamp(s, 0.0, arclength.back());
    const auto it = std::upper_bound(arclength.begin(), arclength.end(), s);
    std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(it - arclength.begin()), points.size() - 1);
    if (hi == 0) hi = 1;
    const std::size_t lo = hi - 1;
    const double span = arclength[hi] - arclength[lo];
    const double f = span > 0.0 ? (s - arclength[lo]) / span : 0.0;
    return points[lo] + (points[hi] - points[lo]) * f;
}

Vec3 GuidePath::tangent_at(double s) const {
    if (points.size() < 2) throw Error("GuidePath: empty path");
    s = std::clamp(s, 0.0, arclength.back());
    const auto it = std::upper_bound(arclength.begin(), arclength.end(), s);
    std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(it - arclength.begin()), points.size() - 1);
    if (hi == 0) hi = 1;
    const std::size_t lo = hi - 1;
    return normalized(points[hi] - points[lo]);
}

void SpiralSpec::validate() const {
    if (!(inner_radius > 0.0) || !(outer_radius > inner_radius))
        throw Error("SpiralSpec: need 0 < inner < outer radius");
    if (!(half_separation > 0.0) || !(half_separation < inner_radius))
        throw Error("SpiralSpec: need 0 < d < inner radius");
    if (resolution < 32) throw Error("SpiralSpec: resolution must be >= 32 points per turn");
    if (!(path_length > outer_radius - inner_radius))
        throw Error("SpiralSpec: path length shorter than the radial span");
    if (!(lead_length >= 0.0)) throw Error("SpiralSpec: lead length must be >= 0");
}

double spiral_arclength(const SpiralSolution& sp, double theta0, double theta1) {
    // ds = sqrt(r^2 + b^2) dtheta with r = a + b theta; substitute r:
    // integral sqrt(r^2+b^2) dr / b, antiderivative F(r) below.
    const auto F = [&](double r) {
        return 0.5 * (r * std::sqrt(r * r + sp.b * sp.b) + sp.b * sp.b * std::asinh(r / sp.b));
    };
    const double r0 = sp.a + sp.b * theta0;
    const double r1 = sp.a + sp.b * theta1;
    return (F(r1) - F(r0)) / sp.b;
}

SpiralSolution solve_spiral(double inner_radius, double outer_radius, double path_length) {
    // Arc length at fixed endpoints is monotone decreasing in b; bisect.
    SpiralSolution sp;
    sp.a = inner_radius;
    double lo = 1e-9, hi = 1.0;
    const auto len_for = [&](double b) {
        SpiralSolution t{inner_radius, b, (outer_radius - inner_radius) / b};
        return spiral_arclength(t, 0.0, t.theta_max);
    };
    if (len_for(lo) < path_length) throw Error("solve_spiral: path length too long for radius range");
    if (len_for(hi) > path_length) throw Error("solve_spiral: path length shorter than radial span");
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (len_for(mid) > path_length)
            lo = mid;
        else
            hi = mid;
    }
    sp.b = 0.5 * (lo + hi);
    sp.theta_max = (outer_radius - inner_radius) / sp.b;
    return sp;
}

namespace {

Vec3 spiral_point(const SpiralSolution& sp, double theta, double z) {
    const double r = sp.a + sp.b * theta;
    return {r * std::cos(theta), r * std::sin(theta), z};
}

// Outward in-plane unit normal of the spiral at theta.
Vec3 spiral_normal_out(const SpiralSolution& sp, double theta) {
    const double r = sp.a + sp.b * theta;
    const double tx = sp.b * std::cos(theta) - r * std::sin(theta);
    const double ty = sp.b * std::sin(theta) + r * std::cos(theta);
    const double tn = std::sqrt(tx * tx + ty * ty);
    return {ty / tn, -tx / tn, 0.0};
}

Vec3 spiral_tangent(const SpiralSolution& sp, double theta) {
    const double r = sp.a + sp.b * theta;
    const double tx = sp.b * std::cos(theta) - r * std::sin(theta);
    const double ty = sp.b * std::sin(theta) + r * std::cos(theta);
    const double tn = std::sqrt(tx * tx + ty * ty);
    return {tx / tn, ty / tn, 0.0};
}

void append_polyline(std::vector<WireSegment>& segs, const std::vector<Vec3>& pts) {
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) segs.push_back({pts[i], pts[i + 1]});
}

}  // namespace

SpiralPair build_spiral_pair(const SpiralSpec& spec) {
    spec.validate();
    const double d = spec.half_separation;
    SpiralSolution sp = solve_spiral(spec.inner_radius, spec.outer_radius, spec.path_length);

    // Offset arms would collide if d exceeded half the radial turn spacing.
    if (2.0 * d >= 2.0 * kPi * sp.b)
        throw Error("build_spiral_pair: arm separation exceeds the spiral turn spacing");

    // theta grid, uniform at the requested resolution, refined near the
    // inner turns so offset-arm chords stay below d/2.
    const double dtheta = 2.0 * kPi / spec.resolution;
    std::vector<double> thetas;
    thetas.push_back(0.0);
    double theta = 0.0;
    while (theta < sp.theta_max) {
        double step = dtheta;
        const double r = sp.a + sp.b * theta;
        const double chord = r * dtheta;
        if (r < 8.0 * 2.0 * d && chord > 0.5 * d) step = dtheta / std::ceil(chord / (0.5 * d));
        theta = std::min(theta + step, sp.theta_max);
        thetas.push_back(theta);
    }

    // Arms sampled at the same theta nodes, traversal outer -> inner for
    // arm+ and inner -> outer for arm-.
    std::vector<Vec3> arm_plus, arm_minus, center;
    arm_plus.reserve(thetas.size());
    arm_minus.reserve(thetas.size());
    center.reserve(thetas.size());
    for (auto it = thetas.rbegin(); it != thetas.rend(); ++it) {
        const Vec3 p = spiral_point(sp, *it, spec.plane_z);
        const Vec3 n = spiral_normal_out(sp, *it);
        center.push_back(p);
        arm_plus.push_back(p + n * d);
    }
    for (double th : thetas) {
        const Vec3 p = spiral_point(sp, th, spec.plane_z);
        const Vec3 n = spiral_normal_out(sp, th);
        arm_minus.push_back(p - n * d);
    }

    // U-turn at the inner end: semicircle of radius d around the centerline
    // endpoint, bulging past the end of the path.
    std::vector<Vec3> uturn;
    {
        const Vec3 c0 = spiral_point(sp, 0.0, spec.plane_z);
        const Vec3 n0 = spiral_normal_out(sp, 0.0);
        const Vec3 t0 = spiral_tangent(sp, 0.0);
        const int narc = 16;
        for (int i = 1; i < narc; ++i) {
            const double phi = kPi * i / narc;
            uturn.push_back(c0 + n0 * (d * std::cos(phi)) - t0 * (d * std::sin(phi)));
        }
    }

    // Leads splay from the backward tangent at the outer end by +-lead_angle.
    const Vec3 t_out = spiral_tangent(sp, sp.theta_max);  // points along increasing theta = backward
    const Vec3 n_out = spiral_normal_out(sp, sp.theta_max);
    const Vec3 dir_plus = normalized(t_out * std::cos(spec.lead_angle) + n_out * std::sin(spec.lead_angle));
    const Vec3 dir_minus = normalized(t_out * std::cos(spec.lead_angle) - n_out * std::sin(spec.lead_angle));

    WireCircuit circuit;
    circuit.name = "spiral_pair";
    std::vector<Vec3> poly;
    if (spec.lead_length > 0.0) poly.push_back(arm_plus.front() + dir_plus * spec.lead_length);
    poly.insert(poly.end(), arm_plus.begin(), arm_plus.end());
    poly.insert(poly.end(), uturn.begin(), uturn.end());
    poly.insert(poly.end(), arm_minus.begin(), arm_minus.end());
    if (spec.lead_length > 0.0) poly.push_back(arm_minus.back() + dir_minus * spec.lead_length);
    append_polyline(circuit.segments, poly);

    SpiralPair out;
    out.circuit = std::move(circuit);
    out.path = GuidePath::from_points(std::move(center));
    out.spiral = sp;
    return out;
}

StraightPair build_straight_pair(double length, double half_separation, double plane_z) {
    if (!(length > 0.0)) throw Error("build_straight_pair: length must be positive");
    if (!(half_separation > 0.0)) throw Error("build_straight_pair: separation must be positive");
    const double d = half_separation;

    WireCircuit circuit;
    circuit.name = "straight_pair";
    circuit.segments.push_back({{length, d, plane_z}, {0.0, d, plane_z}});
    circuit.segments.push_back({{0.0, d, plane_z}, {0.0, -d, plane_z}});
    circuit.segments.push_back({{0.0, -d, plane_z}, {length, -d, plane_z}});

    // Centerline sampled finely enough for arclength projection.
    const int n = 256;
    std::vector<Vec3> pts;
    pts.reserve(n + 1);
    for (int i = 0; i <= n; ++i) pts.push_back({length * i / n, 0.0, plane_z});

    StraightPair out;
    out.circuit = std::move(circuit);
    out.path = GuidePath::from_points(std::move(pts));
    return out;
}

LayoutReport validate_layout(const WireLayout& layout) {
    LayoutReport report;
    for (const auto& c : layout.circuits) {
        for (std::size_t i = 0; i < c.segments.size(); ++i) {
            const auto& s = c.segments[i];
            if (!finite(s.start) || !finite(s.end)) {
                report.findings.push_back(c.name + ": non-finite segment at index " + std::to_string(i));
                continue;
            }
            if (norm(s.end - s.start) == 0.0)
                report.findings.push_back(c.name + ": zero-length segment at index " + std::to_string(i));
            if (i > 0) {
                const double gap = norm(s.start - c.segments[i - 1].end);
                if (gap > 0.0)
                    report.findings.push_back(c.name + ": disconnected at index " + std::to_string(i));
            }
        }
        // Self-intersection: non-adjacent segments closer than the wire width.
        const double clearance = std::max(c.cross_width, c.cross_height);
        for (std::size_t i = 0; i + 2 < c.segments.size(); ++i) {
            for (std::size_t j = i + 2; j < c.segments.size(); ++j) {
                const auto& si = c.segments[i];
                const auto& sj = c.segments[j];
                const double dmin = std::min(
                    std::min(segment_distance(si.start, sj.start, sj.end), segment_distance(si.end, sj.start, sj.end)),
                    std::min(segment_distance(sj.start, si.start, si.end), segment_distance(sj.end, si.start, si.end)));
                if (dmin < clearance) {
                    report.findings.push_back(c.name + ": arm self-intersection between segments " +
                                              std::to_string(i) + " and " + std::to_string(j));
                    j += 8;  // avoid flooding the report for one crossing region
                }
            }
        }
    }
    return report;
}

void save_layout(const WireLayout& layout, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("save_layout: cannot open " + path);
    char buf[256];
    for (const auto& c : layout.circuits) {
        for (const auto& s : c.segments) {
            std::snprintf(buf, sizeof(buf), "%s %.17g %.17g %.17g %.17g %.17g %.17g\n", c.name.c_str(), s.start.x,
                          s.start.y, s.start.z, s.end.x, s.end.y, s.end.z);
            out << buf;
        }
    }
}

WireLayout load_layout(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("load_layout: cannot open " + path);
    WireLayout layout;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string name;
        WireSegment seg;
        if (!(ss >> name >> seg.start.x >> seg.start.y >> seg.start.z >> seg.end.x >> seg.end.y >> seg.end.z))
            throw Error("load_layout: malformed line " + std::to_string(lineno) + " in " + path);
        WireCircuit* c = nullptr;
        for (auto& existing : layout.circuits) {
            if (existing.name == name) c = &existing;
        }
        if (!c) {
            layout.circuits.push_back({});
            c = &layout.circuits.back();
            c->name = name;
        }
        c->segments.push_back(seg);
    }
    return layout;
}

double segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
    const Vec3 ab = b - a;
    const double len2 = norm2(ab);
    if (len2 == 0.0) return norm(p - a);
    const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return norm(p - (a + ab * t));
}

}  // namespace atomfiber
