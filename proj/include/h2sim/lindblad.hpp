#pragma once

// Dissipation and influx superoperators, thermal field states and the
// influx-ratio <-> temperature conversion.

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "hilbert.hpp"
#include "operators.hpp"

namespace h2sim {

namespace constants {
inline constexpr double hbar = 1.054571817e-34;     // J s
inline constexpr double boltzmann = 1.380649e-23;   // J / K
}  // namespace constants

using DenseMatrix = Eigen::MatrixXcd;

/// Dense density matrix; invariants are checked on demand, not on every write.
struct DensityMatrix {
    DenseMatrix rho;

    DensityMatrix() = default;
    explicit DensityMatrix(DenseMatrix m) : rho(std::move(m)) {}

    static DensityMatrix pure(std::size_t dim, std::size_t i) {
        DenseMatrix m = DenseMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
        return DensityMatrix(std::move(m));
    }

    std::size_t dim() const { return static_cast<std::size_t>(rho.rows()); }
    cplx trace() const { return rho.trace(); }
    double hermiticity_defect() const { return (rho - rho.adjoint()).cwiseAbs().maxCoeff(); }

    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<DenseMatrix> es(rho, Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }
};

/// One photon mode's loss (rate gamma_out, jump a) and influx (rate gamma_in, jump a^dagger).
struct Channel {
    SparseOperator jump;
    double gamma_out = 0.0;
    double gamma_in = 0.0;

    void validate() const {
        if (gamma_out < 0.0 || gamma_in < 0.0) throw ValidationError("channel rates must be >= 0");
        if (!(gamma_in == 0.0 && gamma_out == 0.0) && !(gamma_in < gamma_out))
            throw ValidationError("channel influx rate must stay below the loss rate");
    }
};

inline std::vector<Channel> mode_channels(const Basis& basis) {
    std::vector<Channel> out;
    for (Mode m : kAllModes) {
        const auto& spec = basis.mode(m);
        out.push_back({photon_ladder(basis, m, Ladder::annihilate), spec.gamma_out, spec.gamma_in()});
    }
    return out;
}

namespace detail {
inline void require_dim(const Channel& ch, const DenseMatrix& rho) {
    if (ch.jump.dim() != static_cast<std::size_t>(rho.rows()) || rho.rows() != rho.cols())
        throw std::invalid_argument("superoperator: dimension mismatch between channel and density matrix");
}
}  // namespace detail

inline DenseMatrix apply_dissipator(const Channel& ch, const DenseMatrix& rho) {
    detail::require_dim(ch, rho);
    if (ch.gamma_out == 0.0) return DenseMatrix::Zero(rho.rows(), rho.cols());
    const auto& a = ch.jump.matrix();
    const SparseOperator::Matrix n = a.adjoint() * a;
    DenseMatrix out = (a * rho) * a.adjoint();
    out -= 0.5 * (rho * n + n * rho);
    return ch.gamma_out * out;
}

inline DenseMatrix apply_influx(const Channel& ch, const DenseMatrix& rho) {
    detail::require_dim(ch, rho);
    if (ch.gamma_in == 0.0) return DenseMatrix::Zero(rho.rows(), rho.cols());
    const SparseOperator::Matrix ad = ch.jump.matrix().adjoint();
    const SparseOperator::Matrix n = ad.adjoint() * ad;  // a a^dagger on the truncated ladder
    DenseMatrix out = (ad * rho) * ad.adjoint();
    out -= 0.5 * (rho * n + n * rho);
    return ch.gamma_in * out;
}

inline DenseMatrix apply_lindblad_total(const std::vector<Channel>& channels, const DenseMatrix& rho) {
    DenseMatrix out = DenseMatrix::Zero(rho.rows(), rho.cols());
    for (const auto& ch : channels) {
        out += apply_dissipator(ch, rho);
        out += apply_influx(ch, rho);
    }
    return out;
}

/// Basis of a single photon mode |0>..|cutoff>, all other fields fixed at
/// their defaults. Used for field-only checks.
inline Basis single_mode_basis(const ModeSpec& spec) {
    spec.validate();
    ModeTable modes{};
    for (Mode m : kAllModes) modes[index(m)] = ModeSpec{m, 1.0, 0.0, 0.0, 0};
    modes[index(spec.label)] = spec;
    std::vector<BasisState> states;
    for (int p = 0; p <= spec.cutoff; ++p) {
        BasisState s;
        s.photons[index(spec.label)] = static_cast<std::uint8_t>(p);
        states.push_back(s);
    }
    return Basis(std::move(states), modes);
}

/// Truncated Gibbs field state: weights mu^p, p = 0..cutoff, normalized over
/// the truncated ladder.
inline DensityMatrix gibbs_field_state(const ModeSpec& mode, double mu) {
    if (!(mu >= 0.0 && mu < 1.0))
        throw ValidationError("Gibbs field state needs 0 <= mu < 1 (otherwise non-normalizable)");
    const int n = mode.cutoff + 1;
    Eigen::VectorXd w(n);
    double x = 1.0;
    for (int p = 0; p < n; ++p) {
        w(p) = x;
        x *= mu;
    }
    w /= w.sum();
    return DensityMatrix(w.cast<cplx>().asDiagonal());
}

/// T = hbar * omega / (K * ln(1/mu)).
inline double temperature_from_mu(const ModeSpec& mode, double mu, double hbar = constants::hbar,
                                  double boltzmann = constants::boltzmann) {
    if (!(mu > 0.0 && mu < 1.0)) throw ValidationError("temperature_from_mu needs 0 < mu < 1");
    return hbar * mode.frequency / (boltzmann * std::log(1.0 / mu));
}

/// mu = exp(-hbar * omega / (K * T)).
inline double mu_from_temperature(const ModeSpec& mode, double temperature, double hbar = constants::hbar,
                                  double boltzmann = constants::boltzmann) {
    if (!(temperature > 0.0)) throw ValidationError("mu_from_temperature needs T > 0");
    return std::exp(-hbar * mode.frequency / (boltzmann * temperature));
}

}  // namespace h2sim
