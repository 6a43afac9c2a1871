#include <gtest/gtest.h>

#include <random>

#include <h2sim/experiments.hpp>

#include "fixtures.hpp"
#include "reference_oracle.hpp"

using namespace h2sim;

namespace {

DenseMatrix random_matrix(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> d;
    DenseMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = cplx(d(rng), d(rng));
    return m;
}

oracle::Mat to_oracle(const DenseMatrix& m) {
    oracle::Mat o(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) o(i, j) = m(i, j);
    return o;
}

double max_diff(const DenseMatrix& a, const oracle::Mat& b) {
    double d = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) d = std::max(d, std::abs(a(i, j) - b(i, j)));
    return d;
}

ModeSpec loss_mode(int cutoff, double gamma, double mu) { return ModeSpec{Mode::Omega_s, 1e9, gamma, mu, cutoff}; }

}  // namespace

TEST(Lindblad, SinglePhotonDecay) {
    const Basis b = single_mode_basis(loss_mode(1, 2.0, 0.0));
    const auto ch = mode_channels(b)[index(Mode::Omega_s)];
    const auto out = apply_lindblad_total({ch}, DensityMatrix::pure(2, 1).rho);
    EXPECT_DOUBLE_EQ(out(0, 0).real(), 2.0);
    EXPECT_DOUBLE_EQ(out(1, 1).real(), -2.0);
    EXPECT_EQ(out(0, 1), cplx(0.0));
}

TEST(Lindblad, CoherenceDecaysAtHalfTheRate) {
    const Basis b = single_mode_basis(loss_mode(1, 2.0, 0.0));
    const auto ch = mode_channels(b)[index(Mode::Omega_s)];
    DenseMatrix rho = DenseMatrix::Zero(2, 2);
    rho(0, 1) = 1.0;
    const auto out = apply_dissipator(ch, rho);
    EXPECT_DOUBLE_EQ(out(0, 1).real(), -1.0);
}

TEST(Lindblad, MatchesOracleOnRandomMatrices) {
    std::mt19937_64 rng(7);
    const auto c = fixtures::submodel_config();
    const Basis b = build_basis(c);
    const auto channels = mode_channels(b);
    const auto oc = oracle::channels_of(b);
    const oracle::Mat zero(b.size());
    for (int k = 0; k < 10; ++k) {
        const DenseMatrix x = random_matrix(b.size(), rng);
        const auto ours = apply_lindblad_total(channels, x);
        const auto ref = oracle::rhs(zero, oc, to_oracle(x), 1.0);
        EXPECT_LT(max_diff(ours, ref), 1e-12 * c.modes[index(Mode::Omega_up)].gamma_out * 10);
    }
}

TEST(Lindblad, TracelessAndHermiticityPreserving) {
    std::mt19937_64 rng(11);
    const Basis b = single_mode_basis(loss_mode(4, 1.0, 0.4));
    const auto channels = mode_channels(b);
    for (int k = 0; k < 20; ++k) {
        DenseMatrix x = random_matrix(b.size(), rng);
        x = (x + x.adjoint()).eval();
        const auto out = apply_lindblad_total(channels, x);
        EXPECT_LT(std::abs(out.trace()), 1e-12);
        EXPECT_LT((out - out.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Lindblad, TruncatedGibbsStateIsStationary) {
    for (int cutoff : {1, 3, 10})
        for (double mu : {0.1, 0.5, 0.9}) {
            const ModeSpec m = loss_mode(cutoff, 1e7, mu);
            const Basis b = single_mode_basis(m);
            const auto out = apply_lindblad_total(mode_channels(b), gibbs_field_state(m, mu).rho);
            EXPECT_LE(out.cwiseAbs().maxCoeff(), 1e-15 * m.gamma_out) << cutoff << " " << mu;
        }
}

TEST(Lindblad, GibbsStateWeights) {
    const ModeSpec m = loss_mode(3, 1.0, 0.5);
    const auto g = gibbs_field_state(m, 0.5);
    const double z = 1 + 0.5 + 0.25 + 0.125;
    EXPECT_NEAR(g.rho(0, 0).real(), 1 / z, 1e-15);
    EXPECT_NEAR(g.rho(3, 3).real(), 0.125 / z, 1e-15);
    EXPECT_NEAR(g.trace().real(), 1.0, 1e-15);
    EXPECT_THROW(gibbs_field_state(m, 1.0), ValidationError);
}

TEST(Lindblad, TemperatureRoundTrip) {
    const ModeSpec m = loss_mode(2, 1e7, 0.5);
    const double t = temperature_from_mu(m, 0.5);
    EXPECT_GT(t, 0.0);
    EXPECT_NEAR(mu_from_temperature(m, t), 0.5, 1e-14);
    EXPECT_THROW(temperature_from_mu(m, 0.0), ValidationError);
}

TEST(Lindblad, ChannelValidationAndDimensions) {
    const Basis b = single_mode_basis(loss_mode(1, 1.0, 0.5));
    auto ch = mode_channels(b)[index(Mode::Omega_s)];
    EXPECT_NO_THROW(ch.validate());
    ch.gamma_in = 2.0;
    EXPECT_THROW(ch.validate(), ValidationError);
    EXPECT_THROW(apply_dissipator(ch, DenseMatrix::Zero(3, 3)), std::invalid_argument);
}
