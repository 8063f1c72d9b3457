#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "atomfiber/constants.hpp"
#include "atomfiber/geometry.hpp"
#include "atomfiber/vec3.hpp"
#include "atomfiber/waveform.hpp"

namespace atomfiber {

struct FieldEvalError : Error {
    explicit FieldEvalError(const std::string& msg) : Error(msg) {}
};

/// Exact finite-segment Biot-Savart field of a straight filament at unit
/// permeability prefactor: B = mu0 I / (4 pi) * (|r1|+|r2|) (L x r1) /
/// (|r1||r2|(|r1||r2| + r1.r2)). Throws inside the guard distance.
Vec3 segment_field(const WireSegment& seg, double I, const Vec3& p, double guard = 2e-6);

/// Composition of all circuit segments with their instantaneous currents
/// plus the uniform bias. Immutable after construction; evaluation is pure
/// and reentrant.
class FieldModel {
public:
    FieldModel() = default;
    FieldModel(WireLayout layout, std::vector<CurrentWaveform> waveforms, BiasWaveform bias,
               double min_distance_guard = 2e-6);

    /// B [T] at (point, time). Throws FieldEvalError inside the guard.
    Vec3 field(const Vec3& p, double t) const;

    /// Spatial Jacobian dB_i/dx_j [T/m].
    Mat3 jacobian(const Vec3& p, double t) const;

    /// Fused field + Jacobian for the trajectory loop; returns false instead
    /// of throwing when p violates the conductor guard.
    bool try_field_jacobian(const Vec3& p, double t, Vec3& B, Mat3& J) const;
    bool try_field(const Vec3& p, double t, Vec3& B) const;

    /// |B| only; throws inside guard.
    double field_norm(const Vec3& p, double t) const { return norm(field(p, t)); }

    double guard() const { return guard_; }
    const WireLayout& layout() const { return layout_; }
    const BiasWaveform& bias() const { return bias_; }
    const std::vector<CurrentWaveform>& waveforms() const { return waveforms_; }

    /// True when no waveform or bias depends on time.
    bool is_static() const;

    /// Distance from p to the nearest conductor segment.
    double min_conductor_distance(const Vec3& p) const;

    /// Model with the same layout/waveforms but a different fixed bias.
    FieldModel with_bias(const BiasWaveform& bias) const;

private:
    struct Circuit {
        // Structure-of-arrays segment geometry for the accumulation loop.
        std::vector<double> ax, ay, az;  // segment start
        std::vector<double> lx, ly, lz;  // end - start
        std::vector<double> inv_len2;
        int waveform_index = -1;
    };

    WireLayout layout_;
    std::vector<CurrentWaveform> waveforms_;
    BiasWaveform bias_;
    double guard_ = 2e-6;
    std::vector<Circuit> compiled_;

    void compile();
};

}  // namespace atomfiber
