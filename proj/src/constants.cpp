#include "atomfiber/constants.hpp"

#include <cmath>

namespace atomfiber {

double magnetic_moment(const AtomState& state, const PhysicalConstants& c) {
    state.validate();
    const double mu = state.gF * state.mF * c.muB;
    if (!(mu > 0.0)) {
        throw Error("magnetic_moment: state " + state.species + " (F=" + std::to_string(state.F) +
                    ", mF=" + std::to_string(state.mF) + ") is not weak-field-seeking");
    }
    return mu;
}

AtomState species_default(const std::string& name, int F, int mF) {
    AtomState s;
    s.species = name;
    s.F = F;
    s.mF = mF;
    if (name == "7Li") {
        s.mass = 7.0160034366 * constants.amu;
        if (F == 2) s.gF = 0.5;
    } else if (name == "87Rb") {
        s.mass = 86.909180531 * constants.amu;
        if (F == 2) s.gF = 0.5;
    } else {
        throw Error("species_default: unknown species '" + name + "' (built-ins: 7Li, 87Rb)");
    }
    if (s.gF == 0.0) {
        throw Error("species_default: no built-in gF for " + name + " F=" + std::to_string(F) +
                    "; supply gF in the configuration");
    }
    s.validate();
    return s;
}

}  // namespace atomfiber
