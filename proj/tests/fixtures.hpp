#pragma once

// Small instances carved out of the formation scenario.

#include <h2sim/experiments.hpp>

namespace fixtures {

using namespace h2sim;

/// Empty electron register, nuclei apart, nuclear spins down.
inline BasisState blank_state() {
    BasisState s;
    s.photons.fill(0);
    s.electrons.fill(0);
    s.nuclei_apart = 1;
    s.spin1 = s.spin2 = 0;
    return s;
}

/// Formation parameters with every cutoff and rate set to zero.
inline ExperimentConfig closed_base() {
    ExperimentConfig c = formation_experiment();
    for (auto& m : c.modes) {
        m.cutoff = 0;
        m.gamma_out = 0.0;
        m.mu = 0.0;
    }
    c.observables.clear();
    return c;
}

/// One electron in atom 1's excited spin-down orbital, no photons, mode
/// Omega_down with cutoff 1: a resonant two-state Jaynes-Cummings pair.
inline ExperimentConfig jc_config() {
    ExperimentConfig c = closed_base();
    c.name = "jc";
    c.modes[index(Mode::Omega_down)].cutoff = 1;
    BasisState s = blank_state();
    s.electrons[slot(Atom::first, Orbital::excited, Spin::down)] = 1;
    c.initial = s;
    c.observables = {{"excited", {Configuration::of(s)}}};
    c.dt = 1e-3 / c.hamiltonian.g_Omega_down;
    c.horizon = 3.141592653589793 / c.hamiltonian.g_Omega_down;
    c.sample_stride = 1;
    return c;
}

/// One atom (electron in the ground spin-up orbital of atom 1), modes
/// Omega_up and Omega_s, one loss/influx pair on Omega_up.
inline ExperimentConfig submodel_config() {
    ExperimentConfig c = closed_base();
    c.name = "submodel";
    auto& up = c.modes[index(Mode::Omega_up)];
    up.cutoff = 2;
    up.gamma_out = 1e7;
    up.mu = 0.5;
    c.modes[index(Mode::Omega_s)].cutoff = 2;
    BasisState s = blank_state();
    s.photons[index(Mode::Omega_up)] = 1;
    s.electrons[slot(Atom::first, Orbital::ground, Spin::up)] = 1;
    s.spin1 = s.spin2 = 1;
    c.initial = s;
    c.observables = {{"initial", {Configuration::of(s)}}};
    c.dt = 1e-11;
    c.horizon = 1e-6;
    return c;
}

/// The formation scenario restricted to lower cutoffs, small enough for
/// dense cross-checks.
inline ExperimentConfig reduced_formation(int influx_cutoff = 1) {
    ExperimentConfig c = formation_experiment();
    for (Mode m : {Mode::Omega_up, Mode::Omega_down, Mode::Omega_s, Mode::Omega_n})
        c.modes[index(m)].cutoff = influx_cutoff;
    return c;
}

}  // namespace fixtures
