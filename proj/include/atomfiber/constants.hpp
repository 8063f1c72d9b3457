#pragma once

#include <stdexcept>
#include <string>

namespace atomfiber {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// CODATA 2018 values, SI. Fixed at compile time, never mutated.
struct PhysicalConstants {
    double mu0 = 1.25663706212e-6;   // vacuum permeability [T m / A]
    double muB = 9.2740100783e-24;   // Bohr magneton [J / T]
    double hbar = 1.054571817e-34;   // reduced Planck constant [J s]
    double kB = 1.380649e-23;        // Boltzmann constant [J / K]
    double amu = 1.66053906660e-27;  // atomic mass unit [kg]
    double g0 = 9.80665;             // standard gravity [m / s^2]
};

inline constexpr PhysicalConstants constants{};

/// Hyperfine ground-state description sufficient for the Zeeman potential,
/// U = gF mF muB |B| for an adiabatically following weak-field seeker.
struct AtomState {
    std::string species;  // e.g. "7Li"
    double mass = 0.0;    // [kg]
    int F = 0;
    int mF = 0;
    double gF = 0.0;  // signed Lande factor

    void validate() const {
        if (!(mass > 0.0)) throw Error("AtomState: mass must be positive");
        if (std::abs(mF) > F) throw Error("AtomState: |mF| must not exceed F");
    }

    bool weak_field_seeking() const { return gF * mF > 0.0; }
};

/// Effective magnetic moment gF*mF*muB [J/T]. Rejects non-trapped states.
double magnetic_moment(const AtomState& state, const PhysicalConstants& c = constants);

/// Built-in species table. Lande factors are the |gF| = 1/2 convention for
/// the F=2 ground manifolds; override via configuration if a signed value
/// is needed.
AtomState species_default(const std::string& name, int F, int mF);

}  // namespace atomfiber
