#pragma once

// Second-quantized transition operators of the model and a small sparse
// operator algebra over an enumerated Basis.
//
// Operators are defined at two levels. A Transition acts on a single
// BasisState and is basis-independent, so products of transitions never lose
// intermediate states that fall outside a pruned basis. SparseOperator is the
// materialized matrix over a concrete Basis.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/SparseCore>

#include "hilbert.hpp"

namespace h2sim {

using cplx = std::complex<double>;

struct Action {
    BasisState state;
    double amplitude = 1.0;
};

/// Single-state action of an operator: either zero or amplitude * |state>.
using Transition = std::function<std::optional<Action>(const BasisState&)>;

enum class Ladder { annihilate, create };

namespace transitions {

inline Transition identity() {
    return [](const BasisState& s) -> std::optional<Action> { return Action{s, 1.0}; };
}

/// a (annihilate) or a^dagger (create) on one mode, hard-truncated at `cutoff`.
inline Transition photon(Mode m, Ladder dir, int cutoff) {
    const std::size_t i = index(m);
    return [i, dir, cutoff](const BasisState& s) -> std::optional<Action> {
        const int p = s.photons[i];
        BasisState t = s;
        if (dir == Ladder::annihilate) {
            if (p == 0) return std::nullopt;
            t.photons[i] = static_cast<std::uint8_t>(p - 1);
            return Action{t, std::sqrt(static_cast<double>(p))};
        }
        if (p + 1 > cutoff) return std::nullopt;
        t.photons[i] = static_cast<std::uint8_t>(p + 1);
        return Action{t, std::sqrt(static_cast<double>(p + 1))};
    };
}

/// Moves an electron from slot `from` to empty slot `to` with amplitude 1.
inline Transition hop(std::size_t from, std::size_t to) {
    return [from, to](const BasisState& s) -> std::optional<Action> {
        if (!s.occupied(from) || s.occupied(to)) return std::nullopt;
        BasisState t = s;
        t.electrons[from] = 0;
        t.electrons[to] = 1;
        return Action{t, 1.0};
    };
}

/// Diagonal 0/1 operator.
inline Transition projector(std::function<bool(const BasisState&)> pred) {
    return [pred = std::move(pred)](const BasisState& s) -> std::optional<Action> {
        if (!pred(s)) return std::nullopt;
        return Action{s, 1.0};
    };
}

/// Projector onto the bit pattern (slot a, slot b) = (va, vb).
inline Transition pattern(std::size_t a, int va, std::size_t b, int vb) {
    return projector([=](const BasisState& s) { return s.electrons[a] == va && s.electrons[b] == vb; });
}

inline Transition nuclei_together() {
    return projector([](const BasisState& s) { return s.nuclei_apart == 0; });
}

inline Transition nuclei_apart() {
    return projector([](const BasisState& s) { return s.nuclei_apart == 1; });
}

/// sigma_n: k = 1 -> k = 0.
inline Transition tunnel_together() {
    return [](const BasisState& s) -> std::optional<Action> {
        if (s.nuclei_apart != 1) return std::nullopt;
        BasisState t = s;
        t.nuclei_apart = 0;
        return Action{t, 1.0};
    };
}

/// sigma_n^dagger: k = 0 -> k = 1.
inline Transition tunnel_apart() {
    return [](const BasisState& s) -> std::optional<Action> {
        if (s.nuclei_apart != 0) return std::nullopt;
        BasisState t = s;
        t.nuclei_apart = 1;
        return Action{t, 1.0};
    };
}

/// sigma_{Omega^n,i}: nuclear spin of atom i up -> down.
inline Transition nuclear_lower(Atom a) {
    return [a](const BasisState& s) -> std::optional<Action> {
        if (s.nuclear_spin(a) != 1) return std::nullopt;
        BasisState t = s;
        t.nuclear_spin(a) = 0;
        return Action{t, 1.0};
    };
}

inline Transition nuclear_raise(Atom a) {
    return [a](const BasisState& s) -> std::optional<Action> {
        if (s.nuclear_spin(a) != 0) return std::nullopt;
        BasisState t = s;
        t.nuclear_spin(a) = 1;
        return Action{t, 1.0};
    };
}

/// Operator product in written order: product({A, B, C}) acts as A B C,
/// i.e. C is applied first.
inline Transition product(std::initializer_list<Transition> factors) {
    std::vector<Transition> fs(factors);
    return [fs = std::move(fs)](const BasisState& s) -> std::optional<Action> {
        Action cur{s, 1.0};
        for (auto it = fs.rbegin(); it != fs.rend(); ++it) {
            auto r = (*it)(cur.state);
            if (!r) return std::nullopt;
            cur.state = r->state;
            cur.amplitude *= r->amplitude;
        }
        return cur;
    };
}

// Named model operators.

/// sigma_{omega^s}: Phi_1^s -> Phi_0^s.
inline Transition molecular_lower(Spin s) { return hop(antibonding_slot(s), bonding_slot(s)); }
inline Transition molecular_raise(Spin s) { return hop(bonding_slot(s), antibonding_slot(s)); }

/// sigma_{Omega^s,i}: atomic excited -> ground, same spin.
inline Transition atomic_lower(Atom a, Spin s) {
    return hop(slot(a, Orbital::excited, s), slot(a, Orbital::ground, s));
}
inline Transition atomic_raise(Atom a, Spin s) {
    return hop(slot(a, Orbital::ground, s), slot(a, Orbital::excited, s));
}

/// sigma_{Omega^s,i} restricted to one orbital level: spin up -> down.
inline Transition spin_lower(Atom a, Orbital o) { return hop(slot(a, o, Spin::up), slot(a, o, Spin::down)); }
inline Transition spin_raise(Atom a, Orbital o) { return hop(slot(a, o, Spin::down), slot(a, o, Spin::up)); }

/// sigma_{en,i} = a_{Omega^s} sigma_{Omega^s,i}^dagger(ground) a_{Omega^n}^dagger sigma_{Omega^n,i}.
inline Transition spin_exchange(Atom a, const Cutoffs& cut) {
    return product({photon(Mode::Omega_s, Ladder::annihilate, cut[index(Mode::Omega_s)]),
                    spin_raise(a, Orbital::ground),
                    photon(Mode::Omega_n, Ladder::create, cut[index(Mode::Omega_n)]),
                    nuclear_lower(a)});
}

inline Transition spin_exchange_adjoint(Atom a, const Cutoffs& cut) {
    return product({nuclear_raise(a),
                    photon(Mode::Omega_n, Ladder::annihilate, cut[index(Mode::Omega_n)]),
                    spin_lower(a, Orbital::ground),
                    photon(Mode::Omega_s, Ladder::create, cut[index(Mode::Omega_s)])});
}

}  // namespace transitions

/// Complex sparse matrix tied to the Basis it was built on.
class SparseOperator {
public:
    using Matrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

    SparseOperator() = default;
    SparseOperator(std::uint64_t basis_id, Matrix m) : basis_id_(basis_id), m_(std::move(m)) {
        m_.prune(cplx(0.0, 0.0));
        m_.makeCompressed();
    }

    static SparseOperator zero(const Basis& b) {
        return SparseOperator(b.id(), Matrix(static_cast<Eigen::Index>(b.size()), static_cast<Eigen::Index>(b.size())));
    }

    static SparseOperator identity(const Basis& b) {
        Matrix m(static_cast<Eigen::Index>(b.size()), static_cast<Eigen::Index>(b.size()));
        m.setIdentity();
        return SparseOperator(b.id(), std::move(m));
    }

    std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
    std::uint64_t basis_id() const { return basis_id_; }
    const Matrix& matrix() const { return m_; }
    std::size_t nonzeros() const { return static_cast<std::size_t>(m_.nonZeros()); }

    cplx at(std::size_t r, std::size_t c) const {
        return m_.coeff(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }

    struct Entry {
        std::size_t row, col;
        cplx value;
    };

    /// Canonical (row-major sorted) triplets.
    std::vector<Entry> entries() const {
        std::vector<Entry> out;
        out.reserve(nonzeros());
        for (Eigen::Index r = 0; r < m_.outerSize(); ++r)
            for (Matrix::InnerIterator it(m_, r); it; ++it)
                out.push_back({static_cast<std::size_t>(it.row()), static_cast<std::size_t>(it.col()), it.value()});
        return out;
    }

    double max_abs() const {
        double best = 0.0;
        for (Eigen::Index k = 0; k < m_.nonZeros(); ++k) best = std::max(best, std::abs(m_.valuePtr()[k]));
        return best;
    }

    Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(m_); }

private:
    std::uint64_t basis_id_ = 0;
    Matrix m_;
};

namespace detail {
inline void require_same(const SparseOperator& a, const SparseOperator& b, const char* what) {
    if (a.basis_id() != b.basis_id() || a.dim() != b.dim())
        throw std::invalid_argument(std::string(what) + ": operands act on different bases");
}
}  // namespace detail

inline SparseOperator adjoint(const SparseOperator& a) {
    SparseOperator::Matrix m = a.matrix().adjoint();
    return SparseOperator(a.basis_id(), std::move(m));
}

/// alpha * A + beta * B.
inline SparseOperator add(const SparseOperator& a, const SparseOperator& b, cplx alpha = 1.0, cplx beta = 1.0) {
    detail::require_same(a, b, "add");
    SparseOperator::Matrix m = alpha * a.matrix() + beta * b.matrix();
    return SparseOperator(a.basis_id(), std::move(m));
}

inline SparseOperator multiply(const SparseOperator& a, const SparseOperator& b) {
    detail::require_same(a, b, "multiply");
    SparseOperator::Matrix m = a.matrix() * b.matrix();
    return SparseOperator(a.basis_id(), std::move(m));
}

inline SparseOperator scale(const SparseOperator& a, cplx alpha) {
    SparseOperator::Matrix m = alpha * a.matrix();
    return SparseOperator(a.basis_id(), std::move(m));
}

/// [A, B] = AB - BA.
inline SparseOperator commutator(const SparseOperator& a, const SparseOperator& b) {
    return add(multiply(a, b), multiply(b, a), 1.0, -1.0);
}

/// max |A - A^dagger|.
inline double hermiticity_defect(const SparseOperator& a) {
    return add(a, adjoint(a), 1.0, -1.0).max_abs();
}

/// Weighted sum of transitions, materialized over `basis`. Targets outside
/// the basis are dropped.
struct WeightedTransition {
    cplx weight;
    Transition op;
};

inline SparseOperator materialize(const Basis& basis, const std::vector<WeightedTransition>& terms) {
    std::vector<Eigen::Triplet<cplx>> trips;
    for (std::size_t col = 0; col < basis.size(); ++col) {
        for (const auto& term : terms) {
            if (term.weight == cplx(0.0, 0.0)) continue;
            auto r = term.op(basis[col]);
            if (!r) continue;
            auto row = basis.index_of(r->state);
            if (!row) continue;
            trips.emplace_back(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(col),
                               term.weight * r->amplitude);
        }
    }
    const auto n = static_cast<Eigen::Index>(basis.size());
    SparseOperator::Matrix m(n, n);
    m.setFromTriplets(trips.begin(), trips.end());
    return SparseOperator(basis.id(), std::move(m));
}

inline SparseOperator materialize(const Basis& basis, const Transition& op) {
    return materialize(basis, std::vector<WeightedTransition>{{1.0, op}});
}

/// Diagonal operator with entries f(state).
inline SparseOperator diagonal(const Basis& basis, const std::function<double(const BasisState&)>& f) {
    std::vector<Eigen::Triplet<cplx>> trips;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const double v = f(basis[i]);
        if (v != 0.0) trips.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i), v);
    }
    const auto n = static_cast<Eigen::Index>(basis.size());
    SparseOperator::Matrix m(n, n);
    m.setFromTriplets(trips.begin(), trips.end());
    return SparseOperator(basis.id(), std::move(m));
}

// Matrix builders.

inline SparseOperator photon_ladder(const Basis& basis, Mode m, Ladder dir) {
    return materialize(basis, transitions::photon(m, dir, basis.mode(m).cutoff));
}

inline SparseOperator molecular_lower(const Basis& basis, Spin s) {
    return materialize(basis, transitions::molecular_lower(s));
}

inline SparseOperator molecular_raise(const Basis& basis, Spin s) {
    return materialize(basis, transitions::molecular_raise(s));
}

inline SparseOperator atomic_lower(const Basis& basis, Atom a, Spin s) {
    return materialize(basis, transitions::atomic_lower(a, s));
}

inline SparseOperator nuclear_tunnel(const Basis& basis) {
    return materialize(basis, transitions::tunnel_together());
}

inline SparseOperator electron_spinflip(const Basis& basis, Atom a, Orbital o) {
    return materialize(basis, transitions::spin_lower(a, o));
}

inline SparseOperator nuclear_spinflip(const Basis& basis, Atom a) {
    return materialize(basis, transitions::nuclear_lower(a));
}

inline SparseOperator spin_exchange(const Basis& basis, Atom a) {
    return materialize(basis, transitions::spin_exchange(a, basis.cutoffs()));
}

}  // namespace h2sim
