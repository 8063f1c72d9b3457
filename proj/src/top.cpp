#include "atomfiber/top.hpp"

#include <cmath>

namespace atomfiber {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2 = 1.4142135623730951;
}  // namespace

void TopConfig::validate() const {
    if (!(d > 0.0) || !(B > 0.0)) throw Error("TopConfig: d and B must be positive");
    if (!(I0 > 0.0)) throw Error("TopConfig: I0 must be positive");
    if (Imod < 0.0 || Imod >= I0) throw Error("TopConfig: need I0 > Imod >= 0");
    state.validate();
}

TopParams top_closed_form(const TopConfig& cfg) {
    cfg.validate();
    const double mu = magnetic_moment(cfg.state);  // checks weak-field seeking
    (void)mu;

    TopParams out;
    const TwoWireParams tw = two_wire_analytic(cfg.I0, cfg.d, cfg.B);
    out.height = tw.height;
    out.h_equals_d = std::abs(tw.height - cfg.d) <= 0.05 * cfg.d;

    if (cfg.Imod == 0.0) {
        out.static_limit = true;  // no orbiting zero; omega_trap undefined
        return out;
    }

    const auto& c = constants;
    out.omega_larmor = cfg.state.gF * c.muB * cfg.B * cfg.Imod / (kSqrt2 * c.hbar * cfg.I0);
    out.omega_trap = (2.0 * kPi / c.mu0) *
                     std::sqrt(cfg.state.gF * cfg.state.mF * c.muB / (kSqrt2 * cfg.state.mass) *
                               cfg.B * cfg.B * cfg.B / (cfg.I0 * cfg.Imod));
    out.r0 = cfg.d * cfg.Imod / (kSqrt2 * cfg.I0);
    return out;
}

FieldModel make_top_model(const TopConfig& cfg, double wire_length, double guard) {
    cfg.validate();
    const double L = wire_length;
    const double omega = cfg.omega_mod > 0.0 ? cfg.omega_mod : 2.0 * kPi * 50e3;

    WireLayout layout;
    WireCircuit plus;
    plus.name = "wire_plus";
    plus.waveform_ref = "I_plus";
    plus.segments.push_back({{-0.5 * L, cfg.d, 0.0}, {0.5 * L, cfg.d, 0.0}});
    WireCircuit minus;
    minus.name = "wire_minus";
    minus.waveform_ref = "I_minus";
    minus.segments.push_back({{0.5 * L, -cfg.d, 0.0}, {-0.5 * L, -cfg.d, 0.0}});
    layout.circuits = {plus, minus};

    std::vector<CurrentWaveform> waveforms;
    waveforms.push_back(CurrentWaveform::sinusoid("I_plus", cfg.I0, cfg.Imod, omega, cfg.delta_phi));
    waveforms.push_back(CurrentWaveform::sinusoid("I_minus", cfg.I0, cfg.Imod, omega, 0.0));

    return FieldModel(std::move(layout), std::move(waveforms), BiasWaveform::fixed({0.0, 0.0, cfg.B}), guard);
}

double modulation_period(const FieldModel& model) {
    double omega = 0.0;
    for (const auto& w : model.waveforms()) {
        if (w.kind != CurrentWaveform::Kind::Sinusoidal) continue;
        if (omega == 0.0)
            omega = w.omega;
        else if (std::abs(w.omega - omega) > 1e-9 * omega)
            throw Error("modulation_period: sinusoidal waveforms disagree on frequency");
    }
    if (!(omega > 0.0)) throw Error("modulation_period: model has no sinusoidal waveform");
    return 2.0 * kPi / omega;
}

double averaged_field_norm(const FieldModel& model, const Vec3& p, int samples) {
    const double T = modulation_period(model);
    double acc = 0.0;
    for (int k = 0; k < samples; ++k) acc += model.field_norm(p, T * k / samples);
    return acc / samples;
}

Vec3 averaged_field_norm_gradient(const FieldModel& model, const Vec3& p, int samples) {
    const double T = modulation_period(model);
    Vec3 acc;
    for (int k = 0; k < samples; ++k) {
        Vec3 B;
        Mat3 J;
        if (!model.try_field_jacobian(p, T * k / samples, B, J))
            throw FieldEvalError("averaged_field_norm_gradient: point inside conductor guard");
        const double n = norm(B);
        if (n > 0.0) acc += J.tmul(B) / n;
    }
    return acc / samples;
}

double averaged_potential(const FieldModel& model, const Vec3& p, const AtomState& state, int samples) {
    const double mu = magnetic_moment(state);
    const double coarse = averaged_field_norm(model, p, samples);
    const double fine = averaged_field_norm(model, p, 2 * samples);
    if (std::abs(fine - coarse) > 1e-6 * std::abs(fine))
        throw Error("averaged_potential: quadrature not converged at " + std::to_string(samples) + " samples");
    return mu * fine;
}

AdiabaticityReport adiabaticity_check(const TopConfig& cfg, const TopParams& params, double limit1, double limit2) {
    AdiabaticityReport rep;
    rep.limit1 = limit1;
    rep.limit2 = limit2;
    if (!(cfg.omega_mod > 0.0) || params.static_limit) return rep;  // pass stays false
    rep.r1 = cfg.omega_mod / params.omega_larmor;
    rep.r2 = params.omega_trap / cfg.omega_mod;
    const double slack = 1.0 + 1e-12;  // tolerate exact-boundary ratios
    rep.pass = rep.r1 <= limit1 * slack && rep.r2 <= limit2 * slack;
    return rep;
}

}  // namespace atomfiber
