#pragma once

// Slow, independent evaluators for tests. Plain row-major std::vector
// matrices and textbook loops; nothing here reuses the engine's algebra.

#include <cmath>
#include <complex>
#include <cstddef>
#include <deque>
#include <functional>
#include <stdexcept>
#include <vector>

#include <h2sim/hamiltonian.hpp>
#include <h2sim/hilbert.hpp>
#include <h2sim/operators.hpp>

namespace oracle {

using C = std::complex<double>;

struct Mat {
    std::size_t n = 0;
    std::vector<C> a;

    Mat() = default;
    explicit Mat(std::size_t dim) : n(dim), a(dim * dim, C(0.0, 0.0)) {}

    C& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
    C operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

inline Mat from_sparse(const h2sim::SparseOperator& op) {
    Mat m(op.dim());
    for (const auto& e : op.entries()) m(e.row, e.col) = e.value;
    return m;
}

inline Mat mul(const Mat& x, const Mat& y) {
    Mat z(x.n);
    for (std::size_t i = 0; i < x.n; ++i)
        for (std::size_t k = 0; k < x.n; ++k) {
            const C v = x(i, k);
            if (v == C(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < x.n; ++j) z(i, j) += v * y(k, j);
        }
    return z;
}

inline Mat dagger(const Mat& x) {
    Mat z(x.n);
    for (std::size_t i = 0; i < x.n; ++i)
        for (std::size_t j = 0; j < x.n; ++j) z(i, j) = std::conj(x(j, i));
    return z;
}

inline Mat axpy(const Mat& x, C alpha, const Mat& y) {  // x + alpha y
    Mat z = x;
    for (std::size_t i = 0; i < z.a.size(); ++i) z.a[i] += alpha * y.a[i];
    return z;
}

inline double max_abs_diff(const Mat& x, const Mat& y) {
    double d = 0.0;
    for (std::size_t i = 0; i < x.a.size(); ++i) d = std::max(d, std::abs(x.a[i] - y.a[i]));
    return d;
}

inline C trace(const Mat& x) {
    C t = 0.0;
    for (std::size_t i = 0; i < x.n; ++i) t += x(i, i);
    return t;
}

struct Channel {
    Mat a;  // annihilator of the mode
    double gamma_out = 0.0;
    double gamma_in = 0.0;
};

inline std::vector<Channel> channels_of(const h2sim::Basis& b) {
    std::vector<Channel> out;
    for (h2sim::Mode m : h2sim::kAllModes) {
        const auto& spec = b.mode(m);
        out.push_back({from_sparse(h2sim::photon_ladder(b, m, h2sim::Ladder::annihilate)), spec.gamma_out, spec.gamma_in()});
    }
    return out;
}

/// -(i/hbar)[H, rho] + (1/hbar) sum_k [ g_out (A rho A^+ - {A^+A, rho}/2) + g_in (A^+ rho A - {A A^+, rho}/2) ]
inline Mat rhs(const Mat& h, const std::vector<Channel>& channels, const Mat& rho, double hbar) {
    Mat out = axpy(mul(h, rho), -1.0, mul(rho, h));
    for (auto& v : out.a) v *= C(0.0, -1.0 / hbar);
    for (const auto& ch : channels) {
        const Mat ad = dagger(ch.a);
        auto lindblad = [&](const Mat& jump, const Mat& jump_dag, double rate) {
            if (rate == 0.0) return;
            const Mat n = mul(jump_dag, jump);
            Mat term = mul(mul(jump, rho), jump_dag);
            term = axpy(term, -0.5, mul(n, rho));
            term = axpy(term, -0.5, mul(rho, n));
            out = axpy(out, rate / hbar, term);
        };
        lindblad(ch.a, ad, ch.gamma_out);
        lindblad(ad, ch.a, ch.gamma_in);
    }
    return out;
}

struct OracleResult {
    Mat rho;
    std::vector<std::vector<double>> samples;  // diagonal of rho at each sample
    long steps = 0;
};

inline constexpr std::size_t kMaxDim = 64;

/// Classical fourth-order Runge-Kutta on the full master equation.
inline OracleResult rk4_evolve(const Mat& h, const std::vector<Channel>& channels, const Mat& rho0, double dt,
                               double horizon, double hbar = 1.0, long sample_every = 0) {
    if (h.n > kMaxDim) throw std::invalid_argument("rk4_evolve: dimension above the oracle guard");
    if (!(dt > 0.0)) throw std::invalid_argument("rk4_evolve: dt must be > 0");
    OracleResult r{rho0, {}, 0};
    const long steps = std::lround(horizon / dt);
    auto diag = [](const Mat& x) {
        std::vector<double> d(x.n);
        for (std::size_t i = 0; i < x.n; ++i) d[i] = x(i, i).real();
        return d;
    };
    if (sample_every > 0) r.samples.push_back(diag(r.rho));
    for (long s = 1; s <= steps; ++s) {
        const Mat& y = r.rho;
        const Mat k1 = rhs(h, channels, y, hbar);
        const Mat k2 = rhs(h, channels, axpy(y, 0.5 * dt, k1), hbar);
        const Mat k3 = rhs(h, channels, axpy(y, 0.5 * dt, k2), hbar);
        const Mat k4 = rhs(h, channels, axpy(y, dt, k3), hbar);
        Mat next = y;
        for (std::size_t i = 0; i < next.a.size(); ++i)
            next.a[i] += dt / 6.0 * (k1.a[i] + 2.0 * k2.a[i] + 2.0 * k3.a[i] + k4.a[i]);
        double norm = 0.0;
        for (const auto& v : next.a) norm = std::max(norm, std::abs(v));
        if (!(norm < 1e6)) throw std::runtime_error("rk4_evolve: norm blow-up; reduce dt");
        r.rho = std::move(next);
        r.steps = s;
        if (sample_every > 0 && s % sample_every == 0) r.samples.push_back(diag(r.rho));
    }
    return r;
}

/// Vacuum Rabi oscillation of a resonant single-excitation JC pair.
inline double jc_analytic_population(double g, double t, double hbar = 1.0) {
    const double c = std::cos(g * t / hbar);
    return c * c;
}

// Brute-force basis: every state of the full tensor space with the given
// electron count, then reachability by graph search over the non-zero
// pattern of H and the jump operators materialized on that full space.

inline std::vector<h2sim::BasisState> full_tensor_space(const h2sim::Cutoffs& cut, int electrons) {
    std::vector<h2sim::BasisState> out;
    h2sim::BasisState s;
    std::function<void(std::size_t)> photons = [&](std::size_t m) {
        if (m == h2sim::kModeCount) {
            for (unsigned bits = 0; bits < (1u << h2sim::kSlotCount); ++bits) {
                if (__builtin_popcount(bits) != electrons) continue;
                for (std::size_t i = 0; i < h2sim::kSlotCount; ++i) s.electrons[i] = (bits >> i) & 1u;
                for (int k = 0; k < 8; ++k) {
                    s.nuclei_apart = k & 1;
                    s.spin1 = (k >> 1) & 1;
                    s.spin2 = (k >> 2) & 1;
                    out.push_back(s);
                }
            }
            return;
        }
        for (int p = 0; p <= cut[m]; ++p) {
            s.photons[m] = static_cast<std::uint8_t>(p);
            photons(m + 1);
        }
    };
    photons(0);
    return out;
}

inline std::vector<h2sim::BasisState> brute_force_reachable(const h2sim::BasisState& initial,
                                                            const h2sim::HamiltonianParams& params,
                                                            const h2sim::ModeTable& modes) {
    const auto cut = h2sim::cutoffs_of(modes);
    const h2sim::Basis full(full_tensor_space(cut, initial.electron_count()), modes);
    std::vector<std::vector<std::size_t>> adj(full.size());
    auto connect = [&](const h2sim::SparseOperator& op) {
        for (const auto& e : op.entries()) adj[e.col].push_back(e.row);
    };
    connect(h2sim::build_total(full, params));
    for (h2sim::Mode m : h2sim::kAllModes) {
        const auto a = h2sim::photon_ladder(full, m, h2sim::Ladder::annihilate);
        if (modes[h2sim::index(m)].gamma_out > 0.0) connect(a);
        if (modes[h2sim::index(m)].gamma_in() > 0.0) connect(h2sim::photon_ladder(full, m, h2sim::Ladder::create));
    }
    std::vector<char> seen(full.size(), 0);
    const std::size_t start = *full.index_of(initial);
    std::deque<std::size_t> q{start};
    seen[start] = 1;
    std::vector<h2sim::BasisState> out;
    while (!q.empty()) {
        const auto i = q.front();
        q.pop_front();
        out.push_back(full[i]);
        for (auto j : adj[i])
            if (!seen[j]) {
                seen[j] = 1;
                q.push_back(j);
            }
    }
    return out;
}

}  // namespace oracle
