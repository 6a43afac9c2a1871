#pragma once

// Five-term Hamiltonian of the association-dissociation model:
// H = H_assoc + H_dissoc + H_tun + H_spin_flip + H_spin_spin.

#include <array>
#include <string>
#include <vector>

#include "hilbert.hpp"
#include "operators.hpp"

namespace h2sim {

struct HamiltonianParams {
    double hbar = 1.0;
    std::array<double, kModeCount> frequency{};  // rad/s, indexed by Mode
    double g_omega_up = 0.0;
    double g_omega_down = 0.0;
    double g_Omega_up = 0.0;
    double g_Omega_down = 0.0;
    double g_Omega_s = 0.0;
    double g_en = 0.0;
    double zeta0 = 0.0;  ///< both electrons bonding
    double zeta1 = 0.0;  ///< one bonding, one antibonding
    double zeta2 = 0.0;  ///< both antibonding

    double freq(Mode m) const { return frequency[index(m)]; }
    double energy(Mode m) const { return hbar * freq(m); }

    double g_molecular(Spin s) const { return s == Spin::up ? g_omega_up : g_omega_down; }
    double g_atomic(Spin s) const { return s == Spin::up ? g_Omega_up : g_Omega_down; }

    void validate() const {
        if (!(hbar > 0.0)) throw ValidationError("hbar must be > 0");
        for (Mode m : kAllModes)
            if (!(freq(m) > 0.0))
                throw ValidationError("frequency of " + std::string(mode_name(m)) + " must be > 0");
        for (double g : {g_omega_up, g_omega_down, g_Omega_up, g_Omega_down, g_Omega_s, g_en, zeta0, zeta1, zeta2})
            if (!(g >= 0.0)) throw ValidationError("couplings and tunnelling intensities must be >= 0");
    }
};

inline HamiltonianParams with_frequencies(HamiltonianParams p, const ModeTable& modes) {
    for (Mode m : kAllModes) p.frequency[index(m)] = modes[index(m)].frequency;
    return p;
}

namespace terms {

using Terms = std::vector<WeightedTransition>;
namespace tr = transitions;

inline Mode molecular_mode(Spin s) { return s == Spin::up ? Mode::omega_up : Mode::omega_down; }
inline Mode atomic_mode(Spin s) { return s == Spin::up ? Mode::Omega_up : Mode::Omega_down; }

inline Transition number(Mode m, const Cutoffs& cut) {
    return tr::product({tr::photon(m, Ladder::create, cut[index(m)]), tr::photon(m, Ladder::annihilate, cut[index(m)])});
}

/// Appends P * X (P a projector commuting with every factor of X).
inline void append_gated(Terms& out, const Terms& body, const Transition& gate) {
    for (const auto& t : body) out.push_back({t.weight, tr::product({t.op, gate})});
}

/// Appends (P X + X P) / 2. Equals P X whenever P commutes with X; otherwise
/// it is the Hermitian part of P X.
inline void append_conditioned(Terms& out, const Terms& body, const Transition& condition) {
    for (const auto& t : body) {
        out.push_back({0.5 * t.weight, tr::product({condition, t.op})});
        out.push_back({0.5 * t.weight, tr::product({t.op, condition})});
    }
}

/// Projector onto "electron of atom i in the excited orbital":
/// sum over spins of sigma^dagger sigma on the atomic pair.
inline Transition atom_excited(Atom a) {
    return tr::projector([a](const BasisState& s) {
        for (Spin sp : kSpins)
            if (s.occupied(slot(a, Orbital::excited, sp)) && !s.occupied(slot(a, Orbital::ground, sp))) return true;
        return false;
    });
}

inline double atom_excited_weight(const BasisState& s, Atom a) {
    int w = 0;
    for (Spin sp : kSpins)
        w += s.occupied(slot(a, Orbital::excited, sp)) && !s.occupied(slot(a, Orbital::ground, sp));
    return w;
}

inline double atom_ground_weight(const BasisState& s, Atom a) {
    int w = 0;
    for (Spin sp : kSpins)
        w += !s.occupied(slot(a, Orbital::excited, sp)) && s.occupied(slot(a, Orbital::ground, sp));
    return w;
}

/// Diagonal projector with an integer weight (sums of commuting projectors).
inline Transition weighted_projector(std::function<double(const BasisState&)> w) {
    return [w = std::move(w)](const BasisState& s) -> std::optional<Action> {
        const double v = w(s);
        if (v == 0.0) return std::nullopt;
        return Action{s, v};
    };
}

inline Terms associative(const HamiltonianParams& p, const Cutoffs& cut) {
    Terms body;
    for (Spin s : kSpins) {
        const Mode m = molecular_mode(s);
        const Transition a = tr::photon(m, Ladder::annihilate, cut[index(m)]);
        const Transition ad = tr::photon(m, Ladder::create, cut[index(m)]);
        const Transition lower = tr::molecular_lower(s);
        const Transition raise = tr::molecular_raise(s);
        body.push_back({p.energy(m), number(m, cut)});
        body.push_back({p.energy(m), tr::product({raise, lower})});
        body.push_back({p.g_molecular(s), tr::product({ad, lower})});
        body.push_back({p.g_molecular(s), tr::product({a, raise})});
    }
    Terms out;
    append_gated(out, body, tr::nuclei_together());
    return out;
}

inline Terms dissociative(const HamiltonianParams& p, const Cutoffs& cut) {
    Terms body;
    for (Spin s : kSpins) {
        const Mode m = atomic_mode(s);
        body.push_back({p.energy(m), number(m, cut)});
    }
    for (Atom at : kAtoms) {
        for (Spin s : kSpins) {
            const Mode m = atomic_mode(s);
            const Transition a = tr::photon(m, Ladder::annihilate, cut[index(m)]);
            const Transition ad = tr::photon(m, Ladder::create, cut[index(m)]);
            const Transition lower = tr::atomic_lower(at, s);
            const Transition raise = tr::atomic_raise(at, s);
            body.push_back({p.energy(m), tr::product({raise, lower})});
            body.push_back({p.g_atomic(s), tr::product({ad, lower})});
            body.push_back({p.g_atomic(s), tr::product({a, raise})});
        }
    }
    Terms out;
    append_gated(out, body, tr::nuclei_apart());
    return out;
}

inline Terms tunneling(const HamiltonianParams& p) {
    // Phi_1/Phi_0 patterns of each spin pair; (1,0) = sigma^dagger sigma, (0,1) = sigma sigma^dagger.
    auto pat = [](Spin s, int anti, int bond) { return tr::pattern(antibonding_slot(s), anti, bonding_slot(s), bond); };
    const Transition flip_apart = tr::tunnel_apart();
    const Transition flip_together = tr::tunnel_together();
    struct Case {
        double zeta;
        Transition up, down;
    };
    const Case cases[] = {
        {p.zeta2, pat(Spin::up, 1, 0), pat(Spin::down, 1, 0)},
        {p.zeta1, pat(Spin::up, 0, 1), pat(Spin::down, 1, 0)},
        {p.zeta1, pat(Spin::up, 1, 0), pat(Spin::down, 0, 1)},
        {p.zeta0, pat(Spin::up, 0, 1), pat(Spin::down, 0, 1)},
    };
    Terms out;
    for (const auto& c : cases) {
        out.push_back({c.zeta, tr::product({c.up, c.down, flip_apart})});
        out.push_back({c.zeta, tr::product({c.up, c.down, flip_together})});
    }
    return out;
}

inline Terms spin_flip(const HamiltonianParams& p, const Cutoffs& cut) {
    const Mode ms = Mode::Omega_s;
    const Transition a = tr::photon(ms, Ladder::annihilate, cut[index(ms)]);
    const Transition ad = tr::photon(ms, Ladder::create, cut[index(ms)]);
    Terms out;
    for (Atom at : kAtoms) {
        const Transition lower = tr::spin_lower(at, Orbital::excited);
        const Transition raise = tr::spin_raise(at, Orbital::excited);
        Terms body{
            {p.energy(ms), number(ms, cut)},
            {p.energy(ms), tr::product({raise, lower})},
            {p.g_Omega_s, tr::product({ad, lower})},
            {p.g_Omega_s, tr::product({a, raise})},
        };
        Terms conditioned;
        append_conditioned(conditioned, body,
                           weighted_projector([at](const BasisState& s) { return atom_excited_weight(s, at); }));
        append_gated(out, conditioned, tr::nuclei_apart());
    }
    return out;
}

inline Terms spin_spin(const HamiltonianParams& p, const Cutoffs& cut) {
    const Mode ms = Mode::Omega_s;
    const Mode mn = Mode::Omega_n;
    Terms out;
    for (Atom at : kAtoms) {
        Terms body{
            {p.energy(ms), number(ms, cut)},
            {p.energy(ms), tr::product({tr::spin_raise(at, Orbital::ground), tr::spin_lower(at, Orbital::ground)})},
            {p.energy(mn), number(mn, cut)},
            {p.energy(mn), tr::product({tr::nuclear_raise(at), tr::nuclear_lower(at)})},
            {p.g_en, tr::spin_exchange(at, cut)},
            {p.g_en, tr::spin_exchange_adjoint(at, cut)},
        };
        Terms conditioned;
        append_conditioned(conditioned, body,
                           weighted_projector([at](const BasisState& s) { return atom_ground_weight(s, at); }));
        append_gated(out, conditioned, tr::nuclei_apart());
    }
    return out;
}

inline Terms total(const HamiltonianParams& p, const Cutoffs& cut) {
    Terms out;
    for (auto part : {associative(p, cut), dissociative(p, cut), tunneling(p), spin_flip(p, cut), spin_spin(p, cut)})
        out.insert(out.end(), part.begin(), part.end());
    return out;
}

}  // namespace terms

namespace detail {
inline SparseOperator checked_hermitian(SparseOperator h, const char* what) {
    const double scale = std::max(h.max_abs(), 1e-300);
    if (hermiticity_defect(h) > 1e-12 * scale)
        throw std::logic_error(std::string(what) + ": assembled operator is not Hermitian");
    return h;
}
}  // namespace detail

inline SparseOperator build_associative(const Basis& b, const HamiltonianParams& p) {
    return detail::checked_hermitian(materialize(b, terms::associative(p, b.cutoffs())), "H_assoc");
}

inline SparseOperator build_dissociative(const Basis& b, const HamiltonianParams& p) {
    return detail::checked_hermitian(materialize(b, terms::dissociative(p, b.cutoffs())), "H_dissoc");
}

inline SparseOperator build_tunneling(const Basis& b, const HamiltonianParams& p) {
    return detail::checked_hermitian(materialize(b, terms::tunneling(p)), "H_tun");
}

inline SparseOperator build_spin_flip(const Basis& b, const HamiltonianParams& p) {
    return detail::checked_hermitian(materialize(b, terms::spin_flip(p, b.cutoffs())), "H_spin_flip");
}

inline SparseOperator build_spin_spin(const Basis& b, const HamiltonianParams& p) {
    return detail::checked_hermitian(materialize(b, terms::spin_spin(p, b.cutoffs())), "H_spin_spin");
}

inline SparseOperator build_total(const Basis& b, const HamiltonianParams& p) {
    SparseOperator h = build_associative(b, p);
    h = add(h, build_dissociative(b, p));
    h = add(h, build_tunneling(b, p));
    h = add(h, build_spin_flip(b, p));
    h = add(h, build_spin_spin(b, p));
    return detail::checked_hermitian(std::move(h), "H");
}

// Conserved charges.

inline int count_slots(const BasisState& s, std::initializer_list<std::size_t> slots) {
    int n = 0;
    for (auto i : slots) n += s.electrons[i];
    return n;
}

/// Electron number.
inline int charge_electrons(const BasisState& s) { return s.electron_count(); }

/// Omega photons plus electrons in excited/molecular slots.
inline int charge_atomic(const BasisState& s) {
    return s.photon(Mode::Omega_up) + s.photon(Mode::Omega_down) +
           count_slots(s, {slot(Atom::first, Orbital::excited, Spin::up), slot(Atom::first, Orbital::excited, Spin::down),
                           slot(Atom::second, Orbital::excited, Spin::up), slot(Atom::second, Orbital::excited, Spin::down)});
}

/// Omega^s photons plus spin-up electrons.
inline int charge_electron_spin(const BasisState& s) {
    int up = 0;
    for (Atom a : kAtoms)
        for (Orbital o : {Orbital::excited, Orbital::ground}) up += s.electrons[slot(a, o, Spin::up)];
    return s.photon(Mode::Omega_s) + up;
}

/// Omega^n photons plus spin-up nuclei.
inline int charge_nuclear_spin(const BasisState& s) { return s.photon(Mode::Omega_n) + s.spin1 + s.spin2; }

/// omega photons plus electrons held in the atom-1 register. Conserved because
/// molecular emission moves an electron from the Phi_1 (atom 1) slots to the
/// Phi_0 (atom 2) slots.
inline int charge_molecular(const BasisState& s) {
    int n = 0;
    for (std::size_t i = 0; i < 4; ++i) n += s.electrons[i];
    return s.photon(Mode::omega_up) + s.photon(Mode::omega_down) + n;
}

struct ChargeOperators {
    SparseOperator electrons, atomic, electron_spin, nuclear_spin, molecular;
};

inline ChargeOperators charge_operators(const Basis& b) {
    return {diagonal(b, [](const BasisState& s) { return double(charge_electrons(s)); }),
            diagonal(b, [](const BasisState& s) { return double(charge_atomic(s)); }),
            diagonal(b, [](const BasisState& s) { return double(charge_electron_spin(s)); }),
            diagonal(b, [](const BasisState& s) { return double(charge_nuclear_spin(s)); }),
            diagonal(b, [](const BasisState& s) { return double(charge_molecular(s)); })};
}

/// Reachability rules: every Hamiltonian transition with non-zero weight,
/// photon loss for modes with gamma_out > 0, and photon influx for modes with
/// gamma_in > 0.
inline std::vector<Generator> dynamics_generators(const HamiltonianParams& p, const ModeTable& modes) {
    const Cutoffs cut = cutoffs_of(modes);
    auto ts = std::make_shared<terms::Terms>(terms::total(p, cut));
    std::vector<Generator> gens;
    gens.push_back([ts](const BasisState& s, std::vector<BasisState>& out) {
        for (const auto& t : *ts) {
            if (t.weight == cplx(0.0, 0.0)) continue;
            if (auto r = t.op(s)) out.push_back(r->state);
        }
    });
    for (Mode m : kAllModes) {
        const auto& spec = modes[index(m)];
        if (spec.gamma_out > 0.0) {
            auto op = transitions::photon(m, Ladder::annihilate, spec.cutoff);
            gens.push_back([op](const BasisState& s, std::vector<BasisState>& out) {
                if (auto r = op(s)) out.push_back(r->state);
            });
        }
        if (spec.gamma_in() > 0.0) {
            auto op = transitions::photon(m, Ladder::create, spec.cutoff);
            gens.push_back([op](const BasisState& s, std::vector<BasisState>& out) {
                if (auto r = op(s)) out.push_back(r->state);
            });
        }
    }
    return gens;
}

}  // namespace h2sim
