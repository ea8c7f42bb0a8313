#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"
#include "tsim/dense_oracle.hpp"

using namespace tsim;

TEST(DenseOracle, MagicStateAmplitudes) {
    auto s1 = dense_magic_state(1);
    EXPECT_NEAR(std::abs(s1.amp[0] - cplx(M_SQRT1_2, 0)), 0, 1e-15);
    EXPECT_NEAR(std::abs(s1.amp[1] - std::polar(M_SQRT1_2, M_PI / 4)), 0, 1e-15);
    auto s2 = dense_magic_state(2);
    const cplx w = std::polar(1.0, M_PI / 4);
    cplx expected[4] = {0.5, w / 2.0, w / 2.0, cplx(0, 0.5)};
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(s2.amp[i] - expected[i]), 0, 1e-15);
    EXPECT_NEAR(dense_magic_state(6).norm_sq(), 1, 1e-14);
    EXPECT_THROW(dense_magic_state(15), std::invalid_argument);
}

TEST(DenseOracle, ExactMagicStateMatchesFloat) {
    auto e = dense_magic_state_exact(5);
    auto f = dense_magic_state(5);
    for (size_t i = 0; i < f.amp.size(); ++i) EXPECT_NEAR(std::abs(e.amp[i].to_complex() - f.amp[i]), 0, 1e-15);
}

TEST(DenseOracle, SingleQubitExpectations) {
    auto s = dense_magic_state(1);
    EXPECT_NEAR(std::abs(dense_pauli_expect(s, PauliOperator::parse("Z"))), 0, 1e-15);
    EXPECT_NEAR(dense_pauli_expect(s, PauliOperator::parse("X")).real(), M_SQRT1_2, 1e-15);
    EXPECT_NEAR(dense_pauli_expect(s, PauliOperator::parse("Y")).real(), M_SQRT1_2, 1e-15);
    EXPECT_NEAR(dense_projector_expect(s, PauliProjector::parse("+Z")), 0.5, 1e-15);
    DenseState zero{1, {1.0, 0.0}};
    EXPECT_NEAR(dense_projector_expect(zero, PauliProjector::parse("+Z")), 1, 1e-15);
}

TEST(DenseOracle, AgreesWithMatrixOracle) {
    std::mt19937_64 rng(13);
    for (int it = 0; it < 200; ++it) {
        int n = 1 + rng() % 5;
        auto sites = testutil::random_sites(n, rng);
        int w = rng() % 4;
        static const cplx ph[4] = {1, cplx(0, 1), -1, cplx(0, -1)};
        auto ref = testutil::expect(testutil::t_state(n), testutil::pauli_matrix(sites, ph[w]));
        PauliOperator P(sites, w);
        EXPECT_NEAR(std::abs(dense_pauli_expect(dense_magic_state(n), P) - ref), 0, 1e-12);
        EXPECT_NEAR(std::abs(dense_pauli_expect(dense_magic_state_exact(n), P).to_complex() - ref), 0, 1e-12);
    }
}

TEST(DenseOracle, ReducedStatesOfMagicProduct) {
    auto s = dense_magic_state(4);
    for (int q = 0; q < 4; ++q) {
        std::string z(4, 'I'), x(4, 'I');
        z[q] = 'Z';
        x[q] = 'X';
        EXPECT_NEAR(std::abs(dense_pauli_expect(s, PauliOperator(z, 0))), 0, 1e-12);
        EXPECT_NEAR(dense_pauli_expect(s, PauliOperator(x, 0)).real(), M_SQRT1_2, 1e-12);
    }
}

TEST(DenseOracle, SignOrbitSumsToOne) {
    std::mt19937_64 rng(14);
    auto s = with_zeros(dense_magic_state(3), 1);
    for (int it = 0; it < 50; ++it) {
        // a commuting pair on 4 qubits
        PauliOperator P, Q;
        do {
            P = random_pauli(4, rng);
            Q = random_pauli(4, rng);
        } while (!commute(P, Q) || P == Q || P.x_mask().is_zero() && P.z_mask().is_zero());
        double sum = 0;
        for (int a : {1, -1})
            for (int b : {1, -1}) sum += dense_projector_expect(s, PauliProjector(4, {{P, a}, {Q, b}}));
        EXPECT_NEAR(sum, 1, 1e-12);
        ExactAmplitude esum;
        auto ex = dense_magic_state_exact(4);
        for (int a : {1, -1}) esum += dense_projector_expect(ex, PauliProjector(4, {{P, a}}));
        EXPECT_EQ(esum, ExactAmplitude::one());
    }
}

TEST(DenseOracle, ProjectorRegression) {
    // ((I+X1X2)/2)((I+Z3)/2) on |T>^3: (1 + 1/2)/2 * 1/2
    auto v = dense_projector_expect(dense_magic_state(3), PauliProjector::parse("XXI,IIZ"));
    EXPECT_NEAR(v, 0.375, 1e-14);
}
