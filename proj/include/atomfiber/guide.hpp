#pragma once

#include <optional>
#include <string>
#include <vector>

#include "atomfiber/constants.hpp"
#include "atomfiber/field.hpp"
#include "atomfiber/geometry.hpp"

namespace atomfiber {

/// Infinite-wire side guide: distance of the field zero from the wire and
/// the transverse gradient there.
///   r0 = mu0 I / (2 pi B),  g = 2 pi B^2 / (mu0 I)
struct SideGuideParams {
    double r0 = 0.0;        // [m]
    double gradient = 0.0;  // [T/m]
};
SideGuideParams side_guide_analytic(double I, double Bbias);

/// Infinite two-wire guide with counter-propagating currents and vertical
/// bias: guide height above the wire plane and gradient at the zero.
///   h = sqrt(mu0 I d / (pi B) - d^2),  g = 2 h B / (d^2 + h^2)
/// Throws when B exceeds mu0 I / (pi d), where no zero forms above the plane.
struct TwoWireParams {
    double height = 0.0;    // [m]
    double gradient = 0.0;  // [T/m]
};
TwoWireParams two_wire_analytic(double I, double d, double Bbias);

struct ZeroFindError : Error {
    Vec3 best;
    double residual;  // |B| at best [T]
    ZeroFindError(const std::string& msg, const Vec3& b, double r) : Error(msg), best(b), residual(r) {}
};

/// Locate a field zero near the seed by damped Gauss-Newton on B(p) = 0
/// (equivalently Levenberg-Marquardt on |B|^2, which also covers singular
/// Jacobians on a quadrupole line). Converges to |B| < tol or throws
/// ZeroFindError carrying the best point and residual.
Vec3 find_field_zero(const FieldModel& model, const Vec3& seed, double t, double tol = 1e-9, int max_iter = 100);

/// Transverse characterization of the potential at one station.
struct GuideSection {
    double station = 0.0;  // arclength s [m]
    Vec3 minimum;          // minimum position [m]
    double Bmin = 0.0;     // |B| at the minimum [T]
    double height = 0.0;   // above the wire plane [m]
    double gradient = 0.0;         // leading |transverse eigenvalue| [T/m]
    double grad_lo = 0.0, grad_hi = 0.0;  // signed transverse eigenvalues [T/m]
    bool quadrupole = true;        // Bmin below the Ioffe threshold
    double omega1 = 0.0, omega2 = 0.0;  // [rad/s]; zero for quadrupole sections
    double depth_energy = 0.0;       // [J]
    double depth_temperature = 0.0;  // [K]
    Vec3 tangent, n1, n2;  // section frame: path tangent, horizontal, vertical
    Vec3 axis1, axis2;     // principal transverse directions
};

struct SectionOptions {
    double plane_z = 0.0;  // wire plane height, for reporting h
    std::optional<Vec3> seed;       // 3D seed for the in-plane minimum search
    double search_halfwidth = 0.0;  // coarse-scan extent when no seed [m]
    double boundary_box_factor = 3.0;  // depth box is factor*h on a side
    int boundary_samples = 512;        // samples per box edge
    double ioffe_threshold = 1e-8;     // Bmin above this counts as Ioffe [T]
};

/// Locate the |B| minimum in the plane normal to the path at arclength s and
/// characterize it: gradient from the Jacobian, trap frequencies when a
/// nonzero field minimum exists, and the depth as mu_eff times the lowest
/// boundary value of |B| on the section box (clipped at the wire plane).
GuideSection section_at(const FieldModel& model, const GuidePath& path, double s, double t, const AtomState& state,
                        const SectionOptions& options = {});

struct ScanRow {
    double bias = 0.0;     // [T]
    double current = 0.0;  // [A]
    GuideSection section;
    std::string error;  // empty when the row succeeded
    bool ok() const { return error.empty(); }
};

struct ScanTable {
    std::vector<ScanRow> rows;
};

/// Bias scan at a fixed station (default: mid-path). Per-row failures are
/// recorded and the scan continues.
ScanTable guide_scan(const FieldModel& model, const GuidePath& path, const std::vector<double>& bias_values,
                     const AtomState& state, const SectionOptions& options = {},
                     double station = -1.0);

}  // namespace atomfiber
