#include <gtest/gtest.h>

#include <sstream>

#include "test_util.hpp"
#include "tsim/catalog.hpp"
#include "tsim/dense_oracle.hpp"

using namespace tsim;

namespace {

testutil::Vec reconstruct(const MagicDecomposition& d) {
    testutil::Vec v(size_t(1) << d.qubits(), 0);
    for (auto& t : d.terms) {
        auto s = to_dense(t.state);
        auto c = t.coeff.to_complex();
        for (size_t i = 0; i < v.size(); ++i) v[i] += c * s[i];
    }
    return v;
}

}  // namespace

class CatalogEntry : public ::testing::TestWithParam<std::pair<int, int>> {};

TEST_P(CatalogEntry, ReconstructsMagicStateExactly) {
    auto [k, count] = GetParam();
    auto d = catalog_entry(k);
    EXPECT_EQ(d.k, k);
    EXPECT_EQ((int)d.size(), count);
    EXPECT_EQ(reconstruct_exact(d), dense_magic_state_exact(k).amp);
}

TEST_P(CatalogEntry, ReconstructsAgainstMatrixOracle) {
    auto [k, count] = GetParam();
    auto v = reconstruct(catalog_entry(k));
    auto ref = testutil::t_state(k);
    for (size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(std::abs(v[i] - ref[i]), 0, 1e-10);
}

TEST_P(CatalogEntry, NormThroughKernelIsOne) {
    auto [k, count] = GetParam();
    EXPECT_EQ(norm_via_kernel(catalog_entry(k)), ExactAmplitude::one());
}

TEST_P(CatalogEntry, StatesAreNormalized) {
    for (auto& t : catalog_entry(GetParam().first).terms) EXPECT_EQ(t.state.norm_sq(), ExactAmplitude::one()) << t.label;
}

TEST_P(CatalogEntry, FileRoundTrip) {
    auto d = catalog_entry(GetParam().first);
    std::stringstream ss;
    write_decomposition(ss, d, catalog_note(d.k));
    auto r = read_decomposition(ss);
    ASSERT_EQ(r.size(), d.size());
    EXPECT_EQ(r.k, d.k);
    for (size_t i = 0; i < d.size(); ++i) {
        EXPECT_EQ(r.terms[i].coeff, d.terms[i].coeff);
        EXPECT_EQ(r.terms[i].state, d.terms[i].state);
        EXPECT_EQ(r.terms[i].label, d.terms[i].label);
    }
}

INSTANTIATE_TEST_SUITE_P(Entries, CatalogEntry,
                         ::testing::Values(std::pair{1, 2}, std::pair{2, 2}, std::pair{3, 3}, std::pair{6, 7},
                                           std::pair{12, 47}));

TEST(Catalog, MergedStatesReplaceTheirPairs) {
    auto p = catalog_detail::t6_parts();
    auto r2 = ExactAmplitude::sqrt2();
    auto check = [&](const StabilizerState& x, const StabilizerState& y, const StabilizerState& m) {
        auto a = to_dense_exact(tensor(x, y)), b = to_dense_exact(tensor(y, x)), c = to_dense_exact(m);
        ASSERT_EQ(c.size(), 4096u);
        for (size_t i = 0; i < c.size(); ++i) EXPECT_EQ(a[i] + b[i], r2 * c[i]);
    };
    check(p.b60, p.b66, merged_b60_b66());
    check(p.e6, p.o6, merged_e6_o6());
}

TEST(Catalog, SixQubitTermStructure) {
    auto d = t6_decomposition();
    std::vector<int> dims;
    for (auto& t : d.terms) dims.push_back(t.state.m());
    EXPECT_EQ(dims, (std::vector<int>{6, 6, 5, 5, 1, 5, 5}));
    // the two φ states share one coefficient
    EXPECT_EQ(d.terms[5].coeff, d.terms[6].coeff);
}

TEST(Catalog, FileParseErrors) {
    std::stringstream bad1("k=1 terms=1\nterm label=x\ncoeff=(1,0,0,0,0)\nstate n=1 m=0\nG=\nh=0\nJ=\nD=\nc=0\n");
    EXPECT_THROW(read_decomposition(bad1), std::invalid_argument);  // missing global
    std::stringstream bad2("k=1 terms=1\nterm label=x\ncoeff=(1,0,0,0,0)\nstate n=2 m=1\nG=11\nh=00\nJ=\nD=3\nc=0\nglobal=(1,0,0,0,0)\n");
    EXPECT_THROW(read_decomposition(bad2), std::invalid_argument);  // odd D
    std::stringstream bad3("k=1 terms=1\nterm label=x\ncoeff=(1,0,0,0,0)\nstate n=2 m=2\nG=11\nh=00\nJ=0\nD=00\nc=0\nglobal=(1,0,0,0,0)\n");
    EXPECT_THROW(read_decomposition(bad3), std::invalid_argument);  // G count
    std::stringstream empty("# nothing\n");
    EXPECT_THROW(read_decomposition(empty), std::invalid_argument);
}

TEST(Catalog, BlockPlans) {
    EXPECT_EQ(plan_blocks(13, default_policy()), (std::vector<int>{12, 1}));
    EXPECT_EQ(plan_blocks(14, default_policy()), (std::vector<int>{12, 2}));
    EXPECT_EQ(plan_blocks(12, {6}), (std::vector<int>{6, 6}));
    EXPECT_EQ(plan_blocks(5, {3, 2}), (std::vector<int>{3, 2}));
    EXPECT_TRUE(plan_blocks(0, default_policy()).empty());
    EXPECT_THROW(plan_blocks(7, {6}), std::invalid_argument);
    EXPECT_THROW(plan_blocks(4, {4}), std::invalid_argument);
}

TEST(Catalog, BlockedDecompositionCountsAndTerms) {
    EXPECT_EQ(BlockedDecomposition(12, 12, {12}).size(), 47u);
    EXPECT_EQ(BlockedDecomposition(12, 12, {6}).size(), 49u);
    EXPECT_EQ(BlockedDecomposition(24, 24, {12}).size(), 47u * 47u);
    EXPECT_EQ(BlockedDecomposition(5, 5, default_policy()).size(), 6u);  // 3 + 2
    auto b = BlockedDecomposition(5, 7, {3, 2});
    auto m = b.materialize();
    EXPECT_EQ(m.qubits(), 7);
    auto ref = testutil::kron(testutil::t_state(5), testutil::Vec{1, 0, 0, 0});
    auto v = reconstruct(m);
    for (size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(std::abs(v[i] - ref[i]), 0, 1e-12);
    // lazy term i equals the materialized one
    auto direct = tensor(tensor(t3_decomposition(), t2_decomposition()), MagicDecomposition{0, {{ExactAmplitude::one(), StabilizerState::zeros(2), ""}}});
    for (size_t i = 0; i < b.size(); ++i) {
        EXPECT_EQ(b.term(i).coeff, direct.terms[i].coeff);
        EXPECT_EQ(to_dense_exact(b.term(i).state), to_dense_exact(direct.terms[i].state));
    }
}

TEST(Catalog, ZeroMagicStates) {
    auto d = block_decomposition(0);
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d.terms[0].coeff, ExactAmplitude::one());
    auto z = BlockedDecomposition(0, 3, default_policy()).materialize();
    EXPECT_EQ(to_dense_exact(z.terms[0].state)[0], ExactAmplitude::one());
}

TEST(Catalog, ExtendWithZeros) {
    auto d = extend_with_zeros(t2_decomposition(), 4);
    EXPECT_EQ(d.qubits(), 4);
    auto v = reconstruct(d);
    auto ref = testutil::kron(testutil::t_state(2), testutil::Vec{1, 0, 0, 0});
    for (size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(std::abs(v[i] - ref[i]), 0, 1e-12);
    EXPECT_THROW(extend_with_zeros(d, 3), std::invalid_argument);
}

TEST(Catalog, UnknownEntry) { EXPECT_THROW(catalog_entry(4), std::invalid_argument); }
