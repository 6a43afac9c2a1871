#pragma once

// Split-step integration of the master equation:
//   rho~ = U rho U^dagger,  U = exp(-i H dt / hbar)
//   rho' = rho~ + (dt / hbar) L(rho~)
//
// Two implementations share the Propagator:
//   * step(): dense reference on a full DensityMatrix (small systems, tests);
//   * SplitStepEngine: block-sparse production kernel. H splits into connected
//     components; rho is stored only on the component pairs that can ever hold
//     weight, reached from the initial support through the photon jumps.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "config.hpp"
#include "hamiltonian.hpp"
#include "hilbert.hpp"
#include "lindblad.hpp"
#include "operators.hpp"

namespace h2sim {

/// Integration aborted (trace drift, eigen-solver failure).
class NumericalAbort : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Connected components of the non-zero pattern of a square operator,
/// ordered by their smallest state index.
struct Components {
    std::vector<std::vector<std::size_t>> members;
    std::vector<std::size_t> component_of;
    std::vector<std::size_t> local_index;

    std::size_t count() const { return members.size(); }
    std::size_t size(std::size_t c) const { return members[c].size(); }
};

inline Components connected_components(const SparseOperator& h) {
    const std::size_t n = h.dim();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&parent](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (const auto& e : h.entries()) {
        const auto a = find(e.row), b = find(e.col);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    Components c;
    c.component_of.assign(n, 0);
    c.local_index.assign(n, 0);
    std::unordered_map<std::size_t, std::size_t> root_to_id;
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = find(i);
        auto [it, inserted] = root_to_id.emplace(r, c.members.size());
        if (inserted) c.members.emplace_back();
        c.component_of[i] = it->second;
        c.local_index[i] = c.members[it->second].size();
        c.members[it->second].push_back(i);
    }
    return c;
}

/// Spectral propagator exp(-i H dt / hbar), block-diagonal over the
/// connected components of H.
class Propagator {
public:
    Propagator(const SparseOperator& h, double dt, double hbar) : dt_(dt), hbar_(hbar) {
        if (!(dt > 0.0)) throw ValidationError("propagator: dt must be > 0");
        if (!(hbar > 0.0)) throw ValidationError("propagator: hbar must be > 0");
        const double scale = std::max(h.max_abs(), 1e-300);
        if (hermiticity_defect(h) > 1e-12 * scale) throw ValidationError("propagator: H is not Hermitian");
        comps_ = connected_components(h);
        const auto& m = h.matrix();
        for (const auto& members : comps_.members) {
            const auto k = static_cast<Eigen::Index>(members.size());
            DenseMatrix block(k, k);
            for (Eigen::Index a = 0; a < k; ++a)
                for (Eigen::Index b = 0; b < k; ++b)
                    block(a, b) = m.coeff(static_cast<Eigen::Index>(members[a]), static_cast<Eigen::Index>(members[b]));
            Eigen::SelfAdjointEigenSolver<DenseMatrix> es(block);
            if (es.info() != Eigen::Success) throw NumericalAbort("propagator: eigen-solver did not converge");
            eigenvalues_.push_back(es.eigenvalues());
            eigenvectors_.push_back(es.eigenvectors());
        }
        set_dt(dt);
    }

    /// Recomputes the cached unitaries; the eigendecomposition is reused.
    void set_dt(double dt) {
        if (!(dt > 0.0)) throw ValidationError("propagator: dt must be > 0");
        dt_ = dt;
        unitaries_.clear();
        for (std::size_t c = 0; c < comps_.count(); ++c) {
            const Eigen::VectorXcd phase = phases(c, dt);
            unitaries_.push_back(eigenvectors_[c] * phase.asDiagonal() * eigenvectors_[c].adjoint());
        }
    }

    /// exp(-i E_j dt / hbar) for the eigenvalues of component c.
    Eigen::VectorXcd phases(std::size_t c, double dt) const {
        const auto& e = eigenvalues_[c];
        Eigen::VectorXcd out(e.size());
        for (Eigen::Index j = 0; j < e.size(); ++j) out(j) = std::polar(1.0, -e(j) * dt / hbar_);
        return out;
    }

    double dt() const { return dt_; }
    double hbar() const { return hbar_; }
    std::size_t dim() const { return comps_.component_of.size(); }
    const Components& components() const { return comps_; }
    const Eigen::VectorXd& eigenvalues(std::size_t c) const { return eigenvalues_[c]; }
    const DenseMatrix& eigenvectors(std::size_t c) const { return eigenvectors_[c]; }
    const DenseMatrix& unitary(std::size_t c) const { return unitaries_[c]; }

    /// Full N x N matrix; only for small systems.
    DenseMatrix dense_unitary() const { return assemble([this](std::size_t c) { return unitaries_[c]; }); }

    /// V Lambda V^dagger assembled back to N x N; only for small systems.
    DenseMatrix dense_reconstruction() const {
        return assemble([this](std::size_t c) {
            return DenseMatrix(eigenvectors_[c] * eigenvalues_[c].cast<cplx>().asDiagonal() * eigenvectors_[c].adjoint());
        });
    }

private:
    template <class F>
    DenseMatrix assemble(F block_of) const {
        const auto n = static_cast<Eigen::Index>(dim());
        DenseMatrix out = DenseMatrix::Zero(n, n);
        for (std::size_t c = 0; c < comps_.count(); ++c) {
            const DenseMatrix b = block_of(c);
            const auto& mem = comps_.members[c];
            for (std::size_t a = 0; a < mem.size(); ++a)
                for (std::size_t d = 0; d < mem.size(); ++d)
                    out(static_cast<Eigen::Index>(mem[a]), static_cast<Eigen::Index>(mem[d])) =
                        b(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(d));
        }
        return out;
    }

    double dt_;
    double hbar_;
    Components comps_;
    std::vector<Eigen::VectorXd> eigenvalues_;
    std::vector<DenseMatrix> eigenvectors_;
    std::vector<DenseMatrix> unitaries_;
};

inline Propagator spectral_propagator(const SparseOperator& h, double dt, double hbar) { return Propagator(h, dt, hbar); }

inline constexpr double kMaxTraceDriftPerStep = 1e-6;

/// One dense split step. Throws NumericalAbort when the trace moves by more
/// than 1e-6 in the step.
inline DensityMatrix step(const DensityMatrix& rho, const Propagator& prop, const std::vector<Channel>& channels,
                          double dt, double hbar) {
    if (std::abs(dt - prop.dt()) > 1e-15 * std::abs(dt))
        throw std::invalid_argument("step: dt differs from the propagator's dt");
    const DenseMatrix u = prop.dense_unitary();
    DenseMatrix tilde = u * rho.rho * u.adjoint();
    DenseMatrix next = tilde + (dt / hbar) * apply_lindblad_total(channels, tilde);
    next = 0.5 * (next + next.adjoint()).eval();
    const double drift = std::abs(next.trace() - rho.rho.trace());
    if (!(drift <= kMaxTraceDriftPerStep))
        throw NumericalAbort("trace drift " + std::to_string(drift) + " in one step; reduce dt");
    return DensityMatrix(std::move(next));
}

/// Block-sparse split-step kernel.
///
/// Channels must use injective jump operators (photon ladders), so J^dagger J
/// is diagonal in the computational basis. Storage is one flat vector of
/// column-major blocks, one block per active component pair.
class SplitStepEngine {
public:
    struct Entry {
        std::size_t row, col;
        cplx value;
    };

    SplitStepEngine(const SparseOperator& h, const std::vector<Channel>& channels, double dt, double hbar,
                    const std::vector<Entry>& initial)
        : prop_(h, dt, hbar), dt_(dt), hbar_(hbar) {
        const auto& comps = prop_.components();
        const std::size_t n = prop_.dim();
        for (const auto& ch : channels) {
            ch.validate();
            if (ch.jump.dim() != n) throw std::invalid_argument("engine: channel dimension mismatch");
            if (ch.gamma_out > 0.0) add_jump(ch.jump, ch.gamma_out);
            if (ch.gamma_in > 0.0) add_jump(adjoint(ch.jump), ch.gamma_in);
        }

        // Active component pairs: closure of the initial support under the jumps.
        std::set<std::pair<std::size_t, std::size_t>> active;
        std::vector<std::pair<std::size_t, std::size_t>> queue;
        auto touch = [&](std::size_t a, std::size_t b) {
            if (active.emplace(a, b).second) queue.emplace_back(a, b);
        };
        for (const auto& e : initial) {
            if (e.row >= n || e.col >= n) throw std::invalid_argument("engine: initial entry out of range");
            touch(comps.component_of[e.row], comps.component_of[e.col]);
            touch(comps.component_of[e.col], comps.component_of[e.row]);
        }
        std::vector<std::vector<std::vector<std::size_t>>> targets(jumps_.size());
        for (std::size_t k = 0; k < jumps_.size(); ++k) {
            targets[k].resize(comps.count());
            for (std::size_t c = 0; c < comps.count(); ++c) {
                auto& t = targets[k][c];
                for (auto i : comps.members[c])
                    if (jumps_[k].target[i] >= 0) t.push_back(comps.component_of[static_cast<std::size_t>(jumps_[k].target[i])]);
                std::sort(t.begin(), t.end());
                t.erase(std::unique(t.begin(), t.end()), t.end());
            }
        }
        for (std::size_t q = 0; q < queue.size(); ++q) {
            const auto [a, b] = queue[q];
            for (std::size_t k = 0; k < jumps_.size(); ++k)
                for (auto c : targets[k][a])
                    for (auto d : targets[k][b]) touch(c, d);
        }

        // rho is Hermitian: only pairs (a, b) with a <= b are stored.
        std::size_t offset = 0;
        for (const auto& [a, b] : active) {
            if (a > b) continue;
            pair_id_.emplace(std::make_pair(a, b), blocks_.size());
            if (a == b) diagonal_blocks_.push_back(blocks_.size());
            blocks_.push_back({a, b, offset});
            offset += comps.size(a) * comps.size(b);
        }
        rho_.assign(offset, cplx(0.0, 0.0));
        work_.assign(offset, cplx(0.0, 0.0));

        build_dissipative_map(active);
        for (const auto& e : initial) set(e.row, e.col, e.value);
    }

    const Propagator& propagator() const { return prop_; }
    double dt() const { return dt_; }
    std::size_t stored_entries() const { return rho_.size(); }
    std::size_t active_pairs() const { return blocks_.size(); }
    std::size_t dissipative_tasks() const { return tasks_.size(); }

    /// Sets rho(i, j) and its mirror rho(j, i) = conj(value); diagonal values
    /// are taken as real. Throws
    /// std::out_of_range for entries outside the active pattern.
    void set(std::size_t i, std::size_t j, cplx value) {
        const auto& comps = prop_.components();
        if (i == j) value = value.real();
        if (comps.component_of[i] > comps.component_of[j]) {
            std::swap(i, j);
            value = std::conj(value);
        }
        rho_[flat_index(i, j)] = value;
        if (comps.component_of[i] == comps.component_of[j]) rho_[flat_index(j, i)] = std::conj(value);
    }

    cplx get(std::size_t i, std::size_t j) const {
        const auto& comps = prop_.components();
        const std::size_t a = comps.component_of[i], b = comps.component_of[j];
        if (a > b) return std::conj(get(j, i));
        if (pair_id_.find({a, b}) == pair_id_.end()) return 0.0;
        return rho_[flat_index(i, j)];
    }

    double trace() const {
        double t = 0.0;
        const auto& comps = prop_.components();
        for (auto id : diagonal_blocks_) {
            const auto& b = blocks_[id];
            const std::size_t k = comps.size(b.left);
            for (std::size_t a = 0; a < k; ++a) t += rho_[b.offset + a * k + a].real();
        }
        return t;
    }

    /// Probability of state i.
    double population(std::size_t i) const { return get(i, i).real(); }

    /// One split step; returns the trace change.
    double advance() {
        const double before = trace();
        unitary_part();
        dissipative_part();
        symmetrize();
        const double drift = std::abs(trace() - before);
        if (!(drift <= kMaxTraceDriftPerStep))
            throw NumericalAbort("trace drift " + std::to_string(drift) + " in one step; reduce dt");
        return drift;
    }

    void renormalize() {
        const double t = trace();
        if (t > 0.0)
            for (auto& v : rho_) v /= t;
    }

    /// Minimum eigenvalue of rho, computed per coherence cluster (sets of
    /// components linked by active pairs).
    double min_eigenvalue() const {
        const auto& comps = prop_.components();
        std::vector<std::size_t> parent(comps.count());
        std::iota(parent.begin(), parent.end(), std::size_t{0});
        auto find = [&parent](std::size_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        std::vector<char> used(comps.count(), 0);
        for (const auto& b : blocks_) {
            used[b.left] = used[b.right] = 1;
            const auto x = find(b.left), y = find(b.right);
            if (x != y) parent[std::max(x, y)] = std::min(x, y);
        }
        std::map<std::size_t, std::vector<std::size_t>> clusters;
        for (std::size_t c = 0; c < comps.count(); ++c)
            if (used[c])
                for (auto i : comps.members[c]) clusters[find(c)].push_back(i);
        double lo = 0.0;
        bool first = true;
        for (const auto& [root, states] : clusters) {
            const auto k = static_cast<Eigen::Index>(states.size());
            DenseMatrix m(k, k);
            for (Eigen::Index a = 0; a < k; ++a)
                for (Eigen::Index b = 0; b < k; ++b) m(a, b) = get(states[a], states[b]);
            Eigen::SelfAdjointEigenSolver<DenseMatrix> es(m, Eigen::EigenvaluesOnly);
            const double v = es.eigenvalues().minCoeff();
            lo = first ? v : std::min(lo, v);
            first = false;
        }
        return lo;
    }

    /// Full dense rho; only for small systems.
    DenseMatrix dense() const {
        const auto n = static_cast<Eigen::Index>(prop_.dim());
        DenseMatrix out = DenseMatrix::Zero(n, n);
        const auto& comps = prop_.components();
        for (const auto& b : blocks_) {
            const auto& rows = comps.members[b.left];
            const auto& cols = comps.members[b.right];
            for (std::size_t q = 0; q < cols.size(); ++q)
                for (std::size_t p = 0; p < rows.size(); ++p) {
                    const auto r = static_cast<Eigen::Index>(rows[p]), c = static_cast<Eigen::Index>(cols[q]);
                    out(r, c) = rho_[b.offset + q * rows.size() + p];
                    out(c, r) = std::conj(out(r, c));
                }
        }
        return out;
    }

private:
    struct Jump {
        std::vector<long> target;      // -1 when the jump annihilates the state
        std::vector<double> amplitude;
        double rate;
    };

    struct Block {
        std::size_t left, right, offset;
    };

    /// One state of a source component and where a jump sends it.
    struct Leg {
        std::uint32_t local;         // index within the source component
        std::uint32_t target_local;  // index within the target component
        double amplitude;
    };

    struct Segment {
        std::size_t target;  // target component
        std::uint32_t first, count;  // range in legs_
    };

    struct Task {
        std::size_t src, row_stride, col_stride;
        std::size_t dst, dst_ld;
        std::uint32_t rows, cols;  // segment ids
        double weight;
        bool conjugate;
    };

    void add_jump(const SparseOperator& op, double rate) {
        const std::size_t n = op.dim();
        Jump j{std::vector<long>(n, -1), std::vector<double>(n, 0.0), rate};
        std::vector<char> hit(n, 0);
        for (const auto& e : op.entries()) {
            if (j.target[e.col] >= 0 || hit[e.row])
                throw std::invalid_argument("engine: jump operators must map basis states injectively");
            if (std::abs(e.value.imag()) > 0.0) throw std::invalid_argument("engine: jump amplitudes must be real");
            j.target[e.col] = static_cast<long>(e.row);
            j.amplitude[e.col] = e.value.real();
            hit[e.row] = 1;
        }
        jumps_.push_back(std::move(j));
    }

    /// Requires component_of[i] <= component_of[j].
    std::size_t flat_index(std::size_t i, std::size_t j) const {
        const auto& comps = prop_.components();
        const std::size_t a = comps.component_of[i], b = comps.component_of[j];
        auto it = pair_id_.find({a, b});
        if (it == pair_id_.end()) throw std::out_of_range("engine: entry outside the active pattern");
        const auto& blk = blocks_[it->second];
        return blk.offset + comps.local_index[j] * comps.size(a) + comps.local_index[i];
    }

    /// Linear map rho -> rho + (dt/hbar) L(rho) on the stored entries: a decay
    /// factor per entry plus J rho J^dagger for every jump. The jump part is a
    /// list of block tasks; each moves one source block, restricted to the
    /// states a jump sends into one pair of target components. Sources in
    /// unstored (lower) pairs are read as conjugates of their mirrors.
    void build_dissipative_map(const std::set<std::pair<std::size_t, std::size_t>>& active) {
        const auto& comps = prop_.components();
        const double h = dt_ / hbar_;
        const std::size_t n = prop_.dim();
        std::vector<double> loss(n, 0.0);  // diagonal of sum_k rate_k J_k^dagger J_k
        for (const auto& j : jumps_)
            for (std::size_t i = 0; i < n; ++i) loss[i] += j.rate * j.amplitude[i] * j.amplitude[i];
        decay_.assign(rho_.size(), 0.0);
        for (const auto& blk : blocks_)
            for (auto j : comps.members[blk.right])
                for (auto i : comps.members[blk.left]) decay_[flat_index(i, j)] = 1.0 - 0.5 * h * (loss[i] + loss[j]);

        // segments[k][c]: states of component c grouped by the component jump k sends them to.
        std::vector<std::vector<std::vector<std::size_t>>> segments(jumps_.size());
        for (std::size_t k = 0; k < jumps_.size(); ++k) {
            segments[k].resize(comps.count());
            for (std::size_t c = 0; c < comps.count(); ++c) {
                std::map<std::size_t, std::vector<Leg>> by_target;
                const auto& mem = comps.members[c];
                for (std::size_t p = 0; p < mem.size(); ++p) {
                    const long t = jumps_[k].target[mem[p]];
                    if (t < 0) continue;
                    const auto ut = static_cast<std::size_t>(t);
                    by_target[comps.component_of[ut]].push_back(
                        {static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(comps.local_index[ut]),
                         jumps_[k].amplitude[mem[p]]});
                }
                for (auto& [target, legs] : by_target) {
                    segments[k][c].push_back(segments_.size());
                    segments_.push_back({target, static_cast<std::uint32_t>(legs_.size()), static_cast<std::uint32_t>(legs.size())});
                    legs_.insert(legs_.end(), legs.begin(), legs.end());
                }
            }
        }
        for (const auto& [a, b] : active) {
            const bool mirrored = a > b;
            const auto& src = blocks_[pair_id_.at(mirrored ? std::make_pair(b, a) : std::make_pair(a, b))];
            for (std::size_t k = 0; k < jumps_.size(); ++k) {
                for (auto sa : segments[k][a]) {
                    for (auto sb : segments[k][b]) {
                        const std::size_t ta = segments_[sa].target, tb = segments_[sb].target;
                        if (ta > tb) continue;
                        Task t;
                        t.src = src.offset;
                        t.row_stride = mirrored ? comps.size(b) : 1;
                        t.col_stride = mirrored ? 1 : comps.size(a);
                        t.conjugate = mirrored;
                        t.dst = blocks_[pair_id_.at({ta, tb})].offset;
                        t.dst_ld = comps.size(ta);
                        t.rows = static_cast<std::uint32_t>(sa);
                        t.cols = static_cast<std::uint32_t>(sb);
                        t.weight = h * jumps_[k].rate;
                        tasks_.push_back(t);
                    }
                }
            }
        }
    }

    void unitary_part() {
        const auto& comps = prop_.components();
        for (const auto& b : blocks_) {
            const auto r = static_cast<Eigen::Index>(comps.size(b.left));
            const auto c = static_cast<Eigen::Index>(comps.size(b.right));
            if (r == 1 && c == 1) {
                rho_[b.offset] *= prop_.unitary(b.left)(0, 0) * std::conj(prop_.unitary(b.right)(0, 0));
                continue;
            }
            Eigen::Map<DenseMatrix> x(rho_.data() + b.offset, r, c);
            Eigen::Map<DenseMatrix> tmp(work_.data() + b.offset, r, c);
            tmp.noalias() = prop_.unitary(b.left) * x;
            if (b.left == b.right) {
                // Hermitian result: compute the upper triangle, mirror the rest.
                x.triangularView<Eigen::Upper>() = tmp * prop_.unitary(b.right).adjoint();
                x.triangularView<Eigen::StrictlyLower>() = x.adjoint();
            } else {
                x.noalias() = tmp * prop_.unitary(b.right).adjoint();
            }
        }
    }

    void dissipative_part() {
        for (std::size_t r = 0; r < rho_.size(); ++r) work_[r] = decay_[r] * rho_[r];
        for (const auto& t : tasks_) {
            const Segment& rs = segments_[t.rows];
            const Segment& cs = segments_[t.cols];
            const Leg* rl = legs_.data() + rs.first;
            const Leg* cl = legs_.data() + cs.first;
            const cplx* src = rho_.data() + t.src;
            cplx* dst = work_.data() + t.dst;
            for (std::uint32_t q = 0; q < cs.count; ++q) {
                const double wq = t.weight * cl[q].amplitude;
                const cplx* col = src + cl[q].local * t.col_stride;
                cplx* out = dst + cl[q].target_local * t.dst_ld;
                if (t.conjugate) {
                    for (std::uint32_t p = 0; p < rs.count; ++p)
                        out[rl[p].target_local] += (wq * rl[p].amplitude) * std::conj(col[rl[p].local * t.row_stride]);
                } else {
                    for (std::uint32_t p = 0; p < rs.count; ++p)
                        out[rl[p].target_local] += (wq * rl[p].amplitude) * col[rl[p].local * t.row_stride];
                }
            }
        }
        rho_.swap(work_);
    }

    void symmetrize() {
        const auto& comps = prop_.components();
        for (auto id : diagonal_blocks_) {
            const auto& b = blocks_[id];
            const std::size_t k = comps.size(b.left);
            cplx* x = rho_.data() + b.offset;
            for (std::size_t q = 0; q < k; ++q) {
                x[q * k + q].imag(0.0);
                for (std::size_t p = q + 1; p < k; ++p) {
                    const cplx v = 0.5 * (x[q * k + p] + std::conj(x[p * k + q]));
                    x[q * k + p] = v;
                    x[p * k + q] = std::conj(v);
                }
            }
        }
    }

    Propagator prop_;
    double dt_, hbar_;
    std::vector<Jump> jumps_;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> pair_id_;
    std::vector<Block> blocks_;
    std::vector<std::size_t> diagonal_blocks_;
    std::vector<cplx> rho_, work_;
    std::vector<double> decay_;
    std::vector<Leg> legs_;
    std::vector<Segment> segments_;
    std::vector<Task> tasks_;
};

// Observables.

/// Sum of diagonal entries over all basis states matching any configuration
/// (photon-sector marginal).
inline double population(const DensityMatrix& rho, const Basis& basis, const std::vector<Configuration>& configs) {
    double p = 0.0;
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (const auto& c : configs)
            if (c.matches(basis[i])) {
                p += rho.rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
                break;
            }
    return p;
}

/// Stable molecule: nuclei together, both electrons bonding (Phi_0 up and
/// down), antiparallel nuclear spins. First entry is (k1, k2) = (up, down).
inline std::vector<Configuration> h2_configurations() {
    Configuration c;
    c.electrons.fill(0);
    c.electrons[bonding_slot(Spin::up)] = 1;
    c.electrons[bonding_slot(Spin::down)] = 1;
    c.nuclei_apart = 0;
    Configuration final_state = c, final_prime = c;
    final_state.spin1 = 1;
    final_state.spin2 = 0;
    final_prime.spin1 = 0;
    final_prime.spin2 = 1;
    return {final_state, final_prime};
}

/// Basis indices of the states matched by a projector definition.
inline std::vector<std::size_t> h2_projector(const Basis& basis) {
    std::vector<std::size_t> out;
    const auto configs = h2_configurations();
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (const auto& c : configs)
            if (c.matches(basis[i])) {
                out.push_back(i);
                break;
            }
    return out;
}

/// Default observables: initial configuration, the two final configurations and H2.
inline std::vector<Observable> default_observables(const BasisState& initial) {
    const auto h2 = h2_configurations();
    return {{"initial", {Configuration::of(initial)}}, {"final", {h2[0]}}, {"final_prime", {h2[1]}}, {"H2", h2}};
}

struct Trajectory {
    std::vector<double> times;
    std::vector<std::string> names;
    std::vector<std::vector<double>> series;  // series[k][sample]
    std::vector<double> trace;
    std::vector<std::pair<double, double>> min_eigenvalues;  // (t, lambda_min)
    std::size_t basis_size = 0;
    long steps = 0;
    double runtime_seconds = 0.0;

    const std::vector<double>& operator[](const std::string& name) const {
        for (std::size_t k = 0; k < names.size(); ++k)
            if (names[k] == name) return series[k];
        throw std::out_of_range("trajectory has no observable '" + name + "'");
    }

    double final_value(const std::string& name) const {
        const auto& s = (*this)[name];
        if (s.empty()) throw std::out_of_range("trajectory is empty");
        return s.back();
    }
};

/// Basis reached from the config's initial state under its dynamics.
inline Basis build_basis(const ExperimentConfig& config) {
    return enumerate_reachable(config.initial, dynamics_generators(config.params(), config.modes), config.modes);
}

struct RunHooks {
    /// Called after every recorded sample with (t, step).
    std::function<void(double, long)> on_sample;
};

inline Trajectory run(const ExperimentConfig& config, const RunHooks& hooks = {}) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    const HamiltonianParams params = config.params();
    const Basis basis = build_basis(config);
    const SparseOperator h = build_total(basis, params);
    const auto channels = mode_channels(basis);
    const std::size_t init = *basis.index_of(config.initial);

    const auto observables = config.observables.empty() ? default_observables(config.initial) : config.observables;
    std::vector<std::vector<std::size_t>> members;
    for (const auto& o : observables) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < basis.size(); ++i)
            for (const auto& c : o.configurations)
                if (c.matches(basis[i])) {
                    idx.push_back(i);
                    break;
                }
        if (idx.empty()) throw ValidationError("observable '" + o.name + "' matches no reachable configuration");
        members.push_back(std::move(idx));
    }

    SplitStepEngine engine(h, channels, config.dt, params.hbar, {{init, init, 1.0}});

    Trajectory traj;
    traj.basis_size = basis.size();
    for (const auto& o : observables) traj.names.push_back(o.name);
    traj.series.resize(observables.size());

    long samples = 0;
    auto record = [&](long step) {
        const double t = static_cast<double>(step) * config.dt;
        traj.times.push_back(t);
        for (std::size_t k = 0; k < members.size(); ++k) {
            double p = 0.0;
            for (auto i : members[k]) p += engine.population(i);
            traj.series[k].push_back(p);
        }
        traj.trace.push_back(engine.trace());
        if (config.positivity_probe_stride > 0 && samples % config.positivity_probe_stride == 0)
            traj.min_eigenvalues.emplace_back(t, engine.min_eigenvalue());
        ++samples;
        if (hooks.on_sample) hooks.on_sample(t, step);
    };

    const long steps = config.step_count();
    record(0);
    for (long s = 1; s <= steps; ++s) {
        engine.advance();
        if (config.renormalize) engine.renormalize();
        if (s % config.sample_stride == 0 || s == steps) record(s);
    }
    traj.steps = steps;
    traj.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return traj;
}

}  // namespace h2sim
