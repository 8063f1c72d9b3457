#include "atomfiber/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace atomfiber {

namespace {

constexpr double kFourPi = 4.0 * 3.14159265358979323846;

// Unit-current field and Jacobian of one segment, accumulated into scalar
// sums. grad k is a combination of r1 and r2 only, which keeps the Jacobian
// accumulation cheap:
//   B = k (L x r1),  k = (s1+s2)/(s1 s2 (s1 s2 + r1.r2))
//   J = k [L]x + (L x r1) (grad k)^T,  grad k = k (c1 r1 + c2 r2)
struct Accum {
    double bx = 0, by = 0, bz = 0;
    double j00 = 0, j01 = 0, j02 = 0;
    double j10 = 0, j11 = 0, j12 = 0;
    double j20 = 0, j21 = 0, j22 = 0;
};

inline bool guard_violated(double rx, double ry, double rz, double lx, double ly, double lz, double inv_len2,
                           double guard2) {
    double t = (rx * lx + ry * ly + rz * lz) * inv_len2;
    t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
    const double cx = rx - t * lx;
    const double cy = ry - t * ly;
    const double cz = rz - t * lz;
    return cx * cx + cy * cy + cz * cz < guard2;
}

}  // namespace

Vec3 segment_field(const WireSegment& seg, double I, const Vec3& p, double guard) {
    if (segment_distance(p, seg.start, seg.end) < guard)
        throw FieldEvalError("segment_field: evaluation inside conductor guard");
    const Vec3 r1 = p - seg.start;
    const Vec3 r2 = p - seg.end;
    const Vec3 L = seg.end - seg.start;
    const double s1 = norm(r1), s2 = norm(r2);
    const double D = s1 * s2 + dot(r1, r2);
    if (D <= 0.0) throw FieldEvalError("segment_field: singular evaluation on the filament");
    const double k = (s1 + s2) / (s1 * s2 * D);
    return cross(L, r1) * (constants.mu0 / kFourPi * I * k);
}

FieldModel::FieldModel(WireLayout layout, std::vector<CurrentWaveform> waveforms, BiasWaveform bias,
                       double min_distance_guard)
    : layout_(std::move(layout)), waveforms_(std::move(waveforms)), bias_(std::move(bias)),
      guard_(min_distance_guard) {
    if (!(guard_ > 0.0)) throw Error("FieldModel: min_distance_guard must be positive");
    for (const auto& w : waveforms_) w.validate();
    compile();
}

void FieldModel::compile() {
    compiled_.clear();
    for (const auto& circuit : layout_.circuits) {
        Circuit c;
        c.waveform_index = -1;
        for (std::size_t i = 0; i < waveforms_.size(); ++i) {
            if (waveforms_[i].name == circuit.waveform_ref) c.waveform_index = static_cast<int>(i);
        }
        if (c.waveform_index < 0)
            throw Error("FieldModel: circuit '" + circuit.name + "' references unknown waveform '" +
                        circuit.waveform_ref + "'");
        const std::size_t n = circuit.segments.size();
        c.ax.reserve(n);
        c.ay.reserve(n);
        c.az.reserve(n);
        c.lx.reserve(n);
        c.ly.reserve(n);
        c.lz.reserve(n);
        c.inv_len2.reserve(n);
        for (const auto& s : circuit.segments) {
            const Vec3 L = s.end - s.start;
            const double len2 = norm2(L);
            if (!(len2 > 0.0)) throw Error("FieldModel: zero-length segment in circuit '" + circuit.name + "'");
            c.ax.push_back(s.start.x);
            c.ay.push_back(s.start.y);
            c.az.push_back(s.start.z);
            c.lx.push_back(L.x);
            c.ly.push_back(L.y);
            c.lz.push_back(L.z);
            c.inv_len2.push_back(1.0 / len2);
        }
        compiled_.push_back(std::move(c));
    }
}

bool FieldModel::try_field_jacobian(const Vec3& p, double t, Vec3& B, Mat3& J) const {
    const double guard2 = guard_ * guard_;
    double bx = 0, by = 0, bz = 0;
    double j00 = 0, j01 = 0, j02 = 0, j10 = 0, j11 = 0, j12 = 0, j20 = 0, j21 = 0, j22 = 0;

    for (const auto& c : compiled_) {
        const double I = waveforms_[c.waveform_index].current(t);
        const double pref = constants.mu0 / kFourPi * I;
        Accum a;
        const std::size_t n = c.ax.size();
        for (std::size_t i = 0; i < n; ++i) {
            const double rx = p.x - c.ax[i];
            const double ry = p.y - c.ay[i];
            const double rz = p.z - c.az[i];
            const double lx = c.lx[i], ly = c.ly[i], lz = c.lz[i];
            if (guard_violated(rx, ry, rz, lx, ly, lz, c.inv_len2[i], guard2)) return false;

            const double r2x = rx - lx, r2y = ry - ly, r2z = rz - lz;
            const double cx = ly * rz - lz * ry;
            const double cy = lz * rx - lx * rz;
            const double cz = lx * ry - ly * rx;
            const double s1 = std::sqrt(rx * rx + ry * ry + rz * rz);
            const double s2 = std::sqrt(r2x * r2x + r2y * r2y + r2z * r2z);
            const double i1 = 1.0 / s1;
            const double i2 = 1.0 / s2;
            const double dot12 = rx * r2x + ry * r2y + rz * r2z;
            const double D = s1 * s2 + dot12;
            const double invD = 1.0 / D;
            const double sum = s1 + s2;
            const double inv_sum = 1.0 / sum;
            const double k = sum * i1 * i2 * invD;
            const double c1 = i1 * inv_sum - i1 * i1 - (s2 * i1 + 1.0) * invD;
            const double c2 = i2 * inv_sum - i2 * i2 - (s1 * i2 + 1.0) * invD;

            a.bx += k * cx;
            a.by += k * cy;
            a.bz += k * cz;

            // grad k
            const double gx = k * (c1 * rx + c2 * r2x);
            const double gy = k * (c1 * ry + c2 * r2y);
            const double gz = k * (c1 * rz + c2 * r2z);

            a.j00 += cx * gx;
            a.j01 += cx * gy - k * lz;
            a.j02 += cx * gz + k * ly;
            a.j10 += cy * gx + k * lz;
            a.j11 += cy * gy;
            a.j12 += cy * gz - k * lx;
            a.j20 += cz * gx - k * ly;
            a.j21 += cz * gy + k * lx;
            a.j22 += cz * gz;
        }
        bx += pref * a.bx;
        by += pref * a.by;
        bz += pref * a.bz;
        j00 += pref * a.j00;
        j01 += pref * a.j01;
        j02 += pref * a.j02;
        j10 += pref * a.j10;
        j11 += pref * a.j11;
        j12 += pref * a.j12;
        j20 += pref * a.j20;
        j21 += pref * a.j21;
        j22 += pref * a.j22;
    }

    const Vec3 bias = bias_.value(t);
    B = {bx + bias.x, by + bias.y, bz + bias.z};
    J.m[0][0] = j00;
    J.m[0][1] = j01;
    J.m[0][2] = j02;
    J.m[1][0] = j10;
    J.m[1][1] = j11;
    J.m[1][2] = j12;
    J.m[2][0] = j20;
    J.m[2][1] = j21;
    J.m[2][2] = j22;
    return true;
}

bool FieldModel::try_field(const Vec3& p, double t, Vec3& B) const {
    const double guard2 = guard_ * guard_;
    double bx = 0, by = 0, bz = 0;
    for (const auto& c : compiled_) {
        const double I = waveforms_[c.waveform_index].current(t);
        const double pref = constants.mu0 / kFourPi * I;
        double sx = 0, sy = 0, sz = 0;
        const std::size_t n = c.ax.size();
        for (std::size_t i = 0; i < n; ++i) {
            const double rx = p.x - c.ax[i];
            const double ry = p.y - c.ay[i];
            const double rz = p.z - c.az[i];
            const double lx = c.lx[i], ly = c.ly[i], lz = c.lz[i];
            if (guard_violated(rx, ry, rz, lx, ly, lz, c.inv_len2[i], guard2)) return false;

            const double r2x = rx - lx, r2y = ry - ly, r2z = rz - lz;
            const double s1 = std::sqrt(rx * rx + ry * ry + rz * rz);
            const double s2 = std::sqrt(r2x * r2x + r2y * r2y + r2z * r2z);
            const double dot12 = rx * r2x + ry * r2y + rz * r2z;
            const double k = (s1 + s2) / (s1 * s2 * (s1 * s2 + dot12));

            sx += k * (ly * rz - lz * ry);
            sy += k * (lz * rx - lx * rz);
            sz += k * (lx * ry - ly * rx);
        }
        bx += pref * sx;
        by += pref * sy;
        bz += pref * sz;
    }
    const Vec3 bias = bias_.value(t);
    B = {bx + bias.x, by + bias.y, bz + bias.z};
    return true;
}

Vec3 FieldModel::field(const Vec3& p, double t) const {
    Vec3 B;
    if (!try_field(p, t, B))
        throw FieldEvalError("field: evaluation inside conductor guard at point (" + std::to_string(p.x) + ", " +
                             std::to_string(p.y) + ", " + std::to_string(p.z) + ")");
    return B;
}

Mat3 FieldModel::jacobian(const Vec3& p, double t) const {
    Vec3 B;
    Mat3 J;
    if (!try_field_jacobian(p, t, B, J))
        throw FieldEvalError("jacobian: evaluation inside conductor guard at point (" + std::to_string(p.x) + ", " +
                             std::to_string(p.y) + ", " + std::to_string(p.z) + ")");
    return J;
}

bool FieldModel::is_static() const {
    if (!bias_.is_static()) return false;
    for (const auto& w : waveforms_) {
        if (w.kind == CurrentWaveform::Kind::Sinusoidal && w.Imod != 0.0) return false;
        if (w.kind == CurrentWaveform::Kind::PiecewiseLinear && w.knots.size() > 1) {
            for (std::size_t i = 1; i < w.knots.size(); ++i)
                if (w.knots[i].second != w.knots[0].second) return false;
        }
    }
    return true;
}

double FieldModel::min_conductor_distance(const Vec3& p) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : layout_.circuits)
        for (const auto& s : c.segments) best = std::min(best, segment_distance(p, s.start, s.end));
    return best;
}

FieldModel FieldModel::with_bias(const BiasWaveform& bias) const {
    FieldModel copy(*this);
    copy.bias_ = bias;
    return copy;
}

}  // namespace atomfiber
