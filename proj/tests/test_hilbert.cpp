#include <gtest/gtest.h>

#include <h2sim/experiments.hpp>

#include "fixtures.hpp"
#include "reference_oracle.hpp"

using namespace h2sim;

TEST(Slots, RegisterLayout) {
    EXPECT_EQ(slot(Atom::first, Orbital::excited, Spin::up), 0u);
    EXPECT_EQ(slot(Atom::first, Orbital::ground, Spin::down), 3u);
    EXPECT_EQ(slot(Atom::second, Orbital::excited, Spin::up), 4u);
    EXPECT_EQ(slot(Atom::second, Orbital::ground, Spin::down), 7u);
    EXPECT_EQ(antibonding_slot(Spin::down), 1u);
    EXPECT_EQ(bonding_slot(Spin::up), 4u);
}

TEST(ModeNames, RoundTrip) {
    for (Mode m : kAllModes) EXPECT_EQ(mode_from_name(mode_name(m)), m);
    EXPECT_THROW(mode_from_name("Omega_x"), ValidationError);
}

TEST(ModeSpec, Validation) {
    ModeSpec m{Mode::Omega_s, 1e9, 1e7, 0.5, 2};
    EXPECT_NO_THROW(m.validate());
    EXPECT_DOUBLE_EQ(m.gamma_in(), 5e6);
    m.mu = 1.0;
    EXPECT_THROW(m.validate(), ValidationError);
    m.mu = 0.5;
    m.frequency = 0.0;
    EXPECT_THROW(m.validate(), ValidationError);
    m.frequency = 1.0;
    m.cutoff = -1;
    EXPECT_THROW(m.validate(), ValidationError);
}

TEST(BasisState, EncodeIsOrderPreservingAndInvertible) {
    const Basis b = build_basis(formation_experiment());
    for (std::size_t i = 0; i < b.size(); ++i) {
        EXPECT_EQ(BasisState::decode(b[i].encode()), b[i]);
        if (i > 0) {
            EXPECT_LT(b[i - 1], b[i]);
            EXPECT_LT(b[i - 1].encode(), b[i].encode());
        }
    }
}

TEST(BasisState, JsonRoundTrip) {
    const BasisState s = formation_experiment().initial;
    nlohmann::json j = s;
    EXPECT_EQ(j.get<BasisState>(), s);
    j["electrons"][0] = 2;
    EXPECT_THROW(j.get<BasisState>(), ValidationError);
}

TEST(Enumerate, JaynesCummingsPairHasTwoStates) {
    const auto c = fixtures::jc_config();
    const Basis b = build_basis(c);
    ASSERT_EQ(b.size(), 2u);
    BasisState ground = c.initial;
    ground.electrons.fill(0);
    ground.electrons[slot(Atom::first, Orbital::ground, Spin::down)] = 1;
    ground.photons[index(Mode::Omega_down)] = 1;
    EXPECT_TRUE(b.index_of(c.initial).has_value());
    EXPECT_TRUE(b.index_of(ground).has_value());
}

TEST(Enumerate, EmptyGeneratorListGivesSingleton) {
    const auto c = formation_experiment();
    const Basis b = enumerate_reachable(c.initial, {}, c.modes);
    ASSERT_EQ(b.size(), 1u);
    EXPECT_EQ(b[0], c.initial);
}

TEST(Enumerate, InitialOutsideCutoffsIsRejected) {
    auto c = formation_experiment();
    c.initial.photons[index(Mode::omega_up)] = 2;  // cutoff 1
    EXPECT_THROW(build_basis(c), ValidationError);
}

TEST(Enumerate, FormationBasisMatchesBruteForce) {
    const auto c = formation_experiment();
    const Basis b = build_basis(c);
    EXPECT_EQ(b.size(), 6804u);  // frozen from the brute-force closure below
    const auto brute = oracle::brute_force_reachable(c.initial, c.params(), c.modes);
    ASSERT_EQ(brute.size(), b.size());
    for (const auto& s : brute) EXPECT_TRUE(b.index_of(s).has_value());
}

TEST(Enumerate, StatesRespectCutoffsAndElectronCount) {
    const auto c = formation_experiment();
    const Basis b = build_basis(c);
    for (const auto& s : b.states()) {
        EXPECT_TRUE(s.within(b.cutoffs()));
        EXPECT_EQ(s.electron_count(), 2);
    }
}

TEST(Enumerate, SizeMonotoneInEveryCutoff) {
    const auto base = fixtures::reduced_formation(1);
    const std::size_t n0 = build_basis(base).size();
    for (Mode m : kAllModes) {
        auto c = base;
        c.modes[index(m)].cutoff += 1;
        EXPECT_GE(build_basis(c).size(), n0) << mode_name(m);
    }
}

TEST(Enumerate, Deterministic) {
    const auto c = formation_experiment();
    const Basis a = build_basis(c), b = build_basis(c);
    EXPECT_EQ(a.id(), b.id());
    EXPECT_EQ(a.states(), b.states());
}

TEST(Basis, IndexLookup) {
    const auto c = formation_experiment();
    const Basis b = build_basis(c);
    for (std::size_t i = 0; i < b.size(); i += 97) EXPECT_EQ(b.index_of(b[i]), i);
    BasisState outside = c.initial;
    outside.photons[index(Mode::Omega_up)] = 3;
    EXPECT_FALSE(index_of(b, outside).has_value());
}
