#pragma once

#include "atomfiber/constants.hpp"
#include "atomfiber/field.hpp"
#include "atomfiber/guide.hpp"

namespace atomfiber {

/// Time-orbiting two-wire guide configuration. The closed forms assume the
/// guide height equals the half separation d; h_equals_d below records
/// whether the supplied bias puts the guide in that regime.
struct TopConfig {
    double d = 20e-6;        // half separation [m]
    double I0 = 0.1;         // steady current [A]
    double Imod = 0.01;      // modulation amplitude [A]
    double B = 1e-3;         // vertical bias [T]
    double omega_mod = 0.0;  // modulation angular frequency [rad/s]
    double delta_phi = 1.5707963267948966;  // relative phase, pi/2
    AtomState state;

    void validate() const;
};

struct TopParams {
    double omega_larmor = 0.0;  // [rad/s]
    double omega_trap = 0.0;    // [rad/s]
    double r0 = 0.0;            // circle-of-death radius [m]
    double height = 0.0;        // static guide height [m]
    bool h_equals_d = false;    // |h - d|/d <= 5%, the closed forms' regime
    bool static_limit = false;  // Imod == 0: no orbiting zero, plain quadrupole
};

/// Closed-form TOP parameters:
///   omega_Lar  = gF muB B Imod / (sqrt(2) hbar I0)
///   omega_trap = (2 pi / mu0) sqrt( gF mF muB / (sqrt(2) M) * B^3 / (I0 Imod) )
///   r0         = d Imod / (sqrt(2) I0)
TopParams top_closed_form(const TopConfig& cfg);

/// Two separated straight wires along x at y = +-d carrying counter-
/// propagating modulated currents with relative phase delta_phi, plus the
/// vertical bias. Circuits are named "wire_plus" / "wire_minus".
FieldModel make_top_model(const TopConfig& cfg, double wire_length = 0.2, double guard = 2e-6);

/// Time average of |B| over one modulation period by fixed-order periodic
/// quadrature; doubling the sample count must agree to 1e-6 relative or an
/// error is thrown. Returns mu_eff * <|B|> [J].
double averaged_potential(const FieldModel& model, const Vec3& p, const AtomState& state, int samples = 64);

/// <|B|> and <grad|B|> over one period (no convergence check); the gradient
/// average backs the TOP-averaged propagation mode.
double averaged_field_norm(const FieldModel& model, const Vec3& p, int samples = 64);
Vec3 averaged_field_norm_gradient(const FieldModel& model, const Vec3& p, int samples = 64);

/// Modulation period of a model whose sinusoidal waveforms share one
/// frequency; throws if there is none or they disagree.
double modulation_period(const FieldModel& model);

struct AdiabaticityReport {
    double r1 = 0.0;  // omega_mod / omega_larmor
    double r2 = 0.0;  // omega_trap / omega_mod
    double limit1 = 0.1;
    double limit2 = 0.1;
    bool pass = false;
};

/// Frequency ordering check: modulation slow against Larmor precession and
/// fast against the trap oscillation.
AdiabaticityReport adiabaticity_check(const TopConfig& cfg, const TopParams& params, double limit1 = 0.1,
                                      double limit2 = 0.1);

}  // namespace atomfiber
