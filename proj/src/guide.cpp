#include "atomfiber/guide.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace atomfiber {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Gaussian elimination with partial pivoting; A is overwritten.
bool solve3(double A[3][3], double b[3], double x[3]) {
    int idx[3] = {0, 1, 2};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(A[idx[r]][col]) > std::abs(A[idx[piv]][col])) piv = r;
        std::swap(idx[col], idx[piv]);
        const double diag = A[idx[col]][col];
        if (diag == 0.0) return false;
        for (int r = col + 1; r < 3; ++r) {
            const double f = A[idx[r]][col] / diag;
            for (int c = col; c < 3; ++c) A[idx[r]][c] -= f * A[idx[col]][c];
            b[idx[r]] -= f * b[idx[col]];
        }
    }
    for (int row = 2; row >= 0; --row) {
        double s = b[idx[row]];
        for (int c = row + 1; c < 3; ++c) s -= A[idx[row]][c] * x[c];
        const double diag = A[idx[row]][row];
        if (diag == 0.0) return false;
        x[row] = s / diag;
    }
    return true;
}

}  // namespace

SideGuideParams side_guide_analytic(double I, double Bbias) {
    if (!(I > 0.0) || !(Bbias > 0.0)) throw Error("side_guide_analytic: I and B must be positive");
    SideGuideParams p;
    p.r0 = constants.mu0 * I / (2.0 * kPi * Bbias);
    p.gradient = 2.0 * kPi * Bbias * Bbias / (constants.mu0 * I);
    return p;
}

TwoWireParams two_wire_analytic(double I, double d, double Bbias) {
    if (!(I > 0.0) || !(d > 0.0) || !(Bbias > 0.0)) throw Error("two_wire_analytic: I, d, B must be positive");
    const double threshold = constants.mu0 * I / (kPi * d);
    if (Bbias > threshold) {
        throw Error("two_wire_analytic: guide does not form; B exceeds mu0*I/(pi*d) = " + std::to_string(threshold) +
                    " T");
    }
    TwoWireParams p;
    const double arg = constants.mu0 * I * d / (kPi * Bbias) - d * d;
    p.height = std::sqrt(std::max(arg, 0.0));
    p.gradient = 2.0 * p.height * Bbias / (d * d + p.height * p.height);
    return p;
}

Vec3 find_field_zero(const FieldModel& model, const Vec3& seed, double t, double tol, int max_iter) {
    Vec3 p = seed;
    Vec3 B;
    Mat3 J;
    if (!model.try_field_jacobian(p, t, B, J))
        throw ZeroFindError("find_field_zero: seed violates the conductor guard", seed,
                            std::numeric_limits<double>::infinity());

    double lambda = 1e-6;
    Vec3 best = p;
    double best_res = norm(B);
    bool converged = false;
    int polish = 0;

    for (int iter = 0; iter < max_iter; ++iter) {
        const double res = norm(B);
        if (res < best_res) {
            best_res = res;
            best = p;
        }
        if (res < tol) {
            converged = true;
            if (++polish > 4) break;  // a few extra steps pin the point to machine precision
        }

        // Levenberg-Marquardt step on |B|^2: (J^T J + lambda diag) delta = -J^T B
        Mat3 H;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                H.m[i][j] = J.m[0][i] * J.m[0][j] + J.m[1][i] * J.m[1][j] + J.m[2][i] * J.m[2][j];
        const Vec3 g = J.tmul(B);
        const double diag_floor = 1e-30 * (H.m[0][0] + H.m[1][1] + H.m[2][2] + 1e-300);

        bool stepped = false;
        for (int attempt = 0; attempt < 12 && !stepped; ++attempt) {
            double A[3][3];
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) A[i][j] = H.m[i][j];
            for (int i = 0; i < 3; ++i) A[i][i] += lambda * H.m[i][i] + diag_floor;
            double rhs[3] = {-g.x, -g.y, -g.z};
            double d[3];
            if (!solve3(A, rhs, d)) {
                lambda = std::max(lambda * 10.0, 1e-12);
                continue;
            }
            const Vec3 delta{d[0], d[1], d[2]};
            const Vec3 cand = p + delta;
            Vec3 Bc;
            Mat3 Jc;
            if (model.try_field_jacobian(cand, t, Bc, Jc) && norm(Bc) <= res) {
                p = cand;
                B = Bc;
                J = Jc;
                lambda = std::max(lambda * 0.25, 1e-14);
                stepped = true;
            } else {
                lambda *= 10.0;
            }
        }
        if (!stepped) break;  // no descent direction left
    }

    if (best_res < tol) return best;
    throw ZeroFindError("find_field_zero: no convergence after " + std::to_string(max_iter) +
                            " iterations (best residual " + std::to_string(best_res) + " T)",
                        best, best_res);
}

namespace {

struct PlaneMin {
    double u = 0.0, v = 0.0;
    Vec3 point;
    Vec3 B;
    Mat3 J;
    double Bnorm = 0.0;
};

// LM minimization of |B|^2 restricted to the section plane.
bool minimize_in_plane(const FieldModel& model, const Vec3& center, const Vec3& n1, const Vec3& n2, double t,
                       PlaneMin& io) {
    double u = io.u, v = io.v;
    Vec3 B;
    Mat3 J;
    auto eval = [&](double uu, double vv, Vec3& Bout, Mat3& Jout) {
        return model.try_field_jacobian(center + n1 * uu + n2 * vv, t, Bout, Jout);
    };
    if (!eval(u, v, B, J)) return false;

    double lambda = 1e-6;
    for (int iter = 0; iter < 200; ++iter) {
        const Vec3 Au = J * n1;
        const Vec3 Av = J * n2;
        const double h11 = dot(Au, Au), h12 = dot(Au, Av), h22 = dot(Av, Av);
        const double g1 = dot(Au, B), g2 = dot(Av, B);
        const double res = norm(B);

        bool stepped = false;
        for (int attempt = 0; attempt < 12 && !stepped; ++attempt) {
            const double a = h11 * (1.0 + lambda) + 1e-300;
            const double c = h22 * (1.0 + lambda) + 1e-300;
            const double det = a * c - h12 * h12;
            if (det == 0.0) {
                lambda *= 10.0;
                continue;
            }
            const double du = (-g1 * c + g2 * h12) / det;
            const double dv = (-g2 * a + g1 * h12) / det;
            Vec3 Bc;
            Mat3 Jc;
            if (eval(u + du, v + dv, Bc, Jc) && norm(Bc) <= res) {
                const double step = std::sqrt(du * du + dv * dv);
                u += du;
                v += dv;
                B = Bc;
                J = Jc;
                lambda = std::max(lambda * 0.25, 1e-14);
                stepped = true;
                if (step < 1e-13) iter = 200;
            } else {
                lambda *= 10.0;
            }
        }
        if (!stepped) break;
    }

    io.u = u;
    io.v = v;
    io.point = center + n1 * u + n2 * v;
    io.B = B;
    io.J = J;
    io.Bnorm = norm(B);
    return true;
}

}  // namespace

GuideSection section_at(const FieldModel& model, const GuidePath& path, double s, double t, const AtomState& state,
                        const SectionOptions& options) {
    if (s < 0.0 || s > path.length()) throw Error("section_at: station outside the path");
    const Vec3 center = path.point_at(s);
    const Vec3 tangent = path.tangent_at(s);

    // Section frame: n1 horizontal in-plane, n2 vertical-ish.
    Vec3 n1 = cross(Vec3{0.0, 0.0, 1.0}, tangent);
    if (norm(n1) < 1e-9) throw Error("section_at: path tangent is vertical");
    n1 = normalized(n1);
    const Vec3 n2 = cross(tangent, n1);

    PlaneMin pm;
    bool have_start = false;
    if (options.seed) {
        const Vec3 rel = *options.seed - center;
        pm.u = dot(rel, n1);
        pm.v = dot(rel, n2);
        have_start = true;
    } else {
        // Coarse grid over the section to find a basin.
        double w = options.search_halfwidth;
        if (!(w > 0.0)) {
            const double dmin = model.min_conductor_distance(center);
            w = std::min(20.0 * std::max(dmin, 1e-6), 5e-3);
        }
        const int n = 81;
        double bestval = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const double u = -w + 2.0 * w * i / (n - 1);
                const double v = -w + 2.0 * w * j / (n - 1);
                Vec3 B;
                if (!model.try_field(center + n1 * u + n2 * v, t, B)) continue;
                const double val = norm(B);
                if (val < bestval) {
                    bestval = val;
                    pm.u = u;
                    pm.v = v;
                    have_start = true;
                }
            }
        }
    }
    if (!have_start) throw Error("section_at: no valid starting point in the section");
    if (!minimize_in_plane(model, center, n1, n2, t, pm))
        throw Error("section_at: in-plane minimization failed at s = " + std::to_string(s));

    GuideSection sec;
    sec.station = s;
    sec.minimum = pm.point;
    sec.Bmin = pm.Bnorm;
    sec.height = pm.point.z - options.plane_z;
    sec.tangent = tangent;
    sec.n1 = n1;
    sec.n2 = n2;

    // Transverse Jacobian block and principal axes.
    const Vec3 Jn1 = pm.J * n1;
    const Vec3 Jn2 = pm.J * n2;
    const double a = dot(n1, Jn1);
    const double b = 0.5 * (dot(n1, Jn2) + dot(n2, Jn1));
    const double c = dot(n2, Jn2);
    sym2x2_eigen(a, b, c, sec.grad_lo, sec.grad_hi);
    sec.gradient = std::max(std::abs(sec.grad_lo), std::abs(sec.grad_hi));
    const double phi = 0.5 * std::atan2(2.0 * b, a - c);
    sec.axis1 = normalized(n1 * std::cos(phi) + n2 * std::sin(phi));
    sec.axis2 = normalized(n2 * std::cos(phi) - n1 * std::sin(phi));

    sec.quadrupole = sec.Bmin < options.ioffe_threshold;
    if (!sec.quadrupole) {
        const double mu = magnetic_moment(state);
        const double f = mu / (state.mass * sec.Bmin);
        sec.omega1 = std::abs(sec.grad_hi) * std::sqrt(f);
        sec.omega2 = std::abs(sec.grad_lo) * std::sqrt(f);
    }

    // Depth: lowest |B| on the boundary of the section box, clipped at the
    // wire plane so the chip-side saddle stays on the boundary.
    {
        const double scale = std::max(std::abs(sec.height), model.min_conductor_distance(pm.point));
        const double half = 0.5 * options.boundary_box_factor * scale;
        double v_lo = pm.v - half;
        if (n2.z > 1e-9) {
            const double v_at_plane = (options.plane_z - (center.z + pm.u * n1.z)) / n2.z;
            v_lo = std::max(v_lo, v_at_plane);
        }
        const double v_hi = pm.v + half;
        const double u_lo = pm.u - half, u_hi = pm.u + half;
        double boundary_min = std::numeric_limits<double>::infinity();
        const int ns = std::max(options.boundary_samples, 8);
        auto probe = [&](double u, double v) {
            Vec3 B;
            if (model.try_field(center + n1 * u + n2 * v, t, B)) boundary_min = std::min(boundary_min, norm(B));
        };
        for (int i = 0; i <= ns; ++i) {
            const double f = static_cast<double>(i) / ns;
            probe(u_lo + f * (u_hi - u_lo), v_lo);
            probe(u_lo + f * (u_hi - u_lo), v_hi);
            probe(u_lo, v_lo + f * (v_hi - v_lo));
            probe(u_hi, v_lo + f * (v_hi - v_lo));
        }
        if (std::isfinite(boundary_min)) {
            const double mu = magnetic_moment(state);
            sec.depth_energy = mu * std::max(boundary_min - sec.Bmin, 0.0);
            sec.depth_temperature = sec.depth_energy / constants.kB;
        }
    }

    return sec;
}

ScanTable guide_scan(const FieldModel& model, const GuidePath& path, const std::vector<double>& bias_values,
                     const AtomState& state, const SectionOptions& options, double station) {
    if (bias_values.empty()) throw Error("guide_scan: empty bias list");
    const double s = station >= 0.0 ? station : 0.5 * path.length();
    double current = 0.0;
    if (!model.waveforms().empty()) current = model.waveforms().front().current(0.0);

    ScanTable table;
    SectionOptions opt = options;
    for (double B : bias_values) {
        ScanRow row;
        row.bias = B;
        row.current = current;
        try {
            const FieldModel scan_model = model.with_bias(BiasWaveform::fixed({0.0, 0.0, B}));
            row.section = section_at(scan_model, path, s, 0.0, state, opt);
            opt.seed = row.section.minimum;  // warm-start the next row
        } catch (const std::exception& e) {
            row.error = e.what();
            opt.seed.reset();
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace atomfiber
