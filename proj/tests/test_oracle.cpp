// Sanity checks on the reference evaluators themselves.

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "reference_oracle.hpp"

using namespace h2sim;

TEST(Oracle, FullTensorSpaceSize) {
    const Cutoffs cut = {1, 0, 2, 0, 1, 0};
    // (2 * 3 * 2 photon configurations) * C(8, 2) * 2^3
    EXPECT_EQ(oracle::full_tensor_space(cut, 2).size(), 12u * 28u * 8u);
}

TEST(Oracle, RungeKuttaReproducesVacuumRabi) {
    const auto c = fixtures::jc_config();
    const Basis b = build_basis(c);
    const auto p = c.params();
    oracle::Mat rho(2);
    const auto i0 = *b.index_of(c.initial);
    rho(i0, i0) = 1.0;
    const double g = p.g_Omega_down;
    const double horizon = 1.0 / g;
    const auto r = oracle::rk4_evolve(oracle::from_sparse(build_total(b, p)), {}, rho, 1e-3 / g, horizon, p.hbar);
    EXPECT_NEAR(r.rho(i0, i0).real(), oracle::jc_analytic_population(g, horizon), 1e-10);
    EXPECT_EQ(r.steps, 1000);
}

TEST(Oracle, RightHandSideIsTraceless) {
    const auto c = fixtures::submodel_config();
    const Basis b = build_basis(c);
    oracle::Mat rho(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) rho(i, i) = 1.0 / double(b.size());
    rho(0, b.size() - 1) = rho(b.size() - 1, 0) = 0.05;
    const auto d = oracle::rhs(oracle::from_sparse(build_total(b, c.params())), oracle::channels_of(b), rho, 1.0);
    EXPECT_LT(std::abs(oracle::trace(d)), 1e-6);  // entries are O(1e10)
}

TEST(Oracle, GuardsAgainstLargeSystems) {
    oracle::Mat big(oracle::kMaxDim + 1);
    EXPECT_THROW(oracle::rk4_evolve(big, {}, big, 1.0, 1.0), std::invalid_argument);
    oracle::Mat small(2);
    EXPECT_THROW(oracle::rk4_evolve(small, {}, small, 0.0, 1.0), std::invalid_argument);
}

TEST(Oracle, BruteForceFindsTheJaynesCummingsPair) {
    const auto c = fixtures::jc_config();
    EXPECT_EQ(oracle::brute_force_reachable(c.initial, c.params(), c.modes).size(), 2u);
}
