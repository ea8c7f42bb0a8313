#include <gtest/gtest.h>

#include <random>
#include <set>

#include "tsim/gf2.hpp"

using namespace tsim;

namespace {

BitVector random_vec(int n, std::mt19937_64& rng) {
    BitVector v(n);
    for (int i = 0; i < n; ++i)
        if (rng() & 1) v.set(i);
    return v;
}

// all points of an affine space by enumeration
std::set<std::string> points(const AffineSpace& A) {
    std::set<std::string> s;
    for (uint64_t k = 0; k < (uint64_t(1) << A.dim()); ++k) {
        BitVector x = A.shift();
        for (int j = 0; j < A.dim(); ++j)
            if ((k >> j) & 1) x ^= A.basis()[j];
        s.insert(x.to_string());
    }
    return s;
}

// brute-force rank: size of the span
int span_rank(const std::vector<BitVector>& vs, int n) {
    std::set<std::string> span{BitVector(n).to_string()};
    for (auto& v : vs) {
        std::set<std::string> next = span;
        for (auto& s : span) next.insert((BitVector::from_string(s) ^ v).to_string());
        span = next;
    }
    int r = 0;
    while ((size_t(1) << r) < span.size()) ++r;
    return r;
}

AffineSpace random_space(int n, int m, std::mt19937_64& rng) {
    while (true) {
        std::vector<BitVector> b;
        for (int j = 0; j < m; ++j) b.push_back(random_vec(n, rng));
        if (SpanSolver(b, n).independent()) return AffineSpace(n, b, random_vec(n, rng));
    }
}

}  // namespace

TEST(BitVector, BasicOps) {
    auto v = BitVector::from_string("10110");
    EXPECT_EQ(v.size(), 5);
    EXPECT_EQ(v.popcount(), 3);
    EXPECT_EQ(v.first_set(), 0);
    EXPECT_EQ(v.to_string(), "10110");
    EXPECT_EQ(v.to_index(), 0b10110u);
    EXPECT_EQ(BitVector::from_index(5, 0b10110), v);
    EXPECT_TRUE(v.dot(BitVector::from_string("10000")));
    EXPECT_FALSE(v.dot(BitVector::from_string("10100")));
    EXPECT_EQ(v.concat(BitVector::from_string("01")).to_string(), "1011001");
    EXPECT_EQ(v.erase(0).to_string(), "0110");
    EXPECT_EQ(v.resized(3).to_string(), "101");
    EXPECT_THROW(BitVector::from_string("10a"), std::invalid_argument);
}

TEST(BitVector, WideVectorsCrossWordBoundaries) {
    std::mt19937_64 rng(4);
    for (int it = 0; it < 200; ++it) {
        int n = 60 + rng() % 80;
        auto a = random_vec(n, rng), b = random_vec(n, rng);
        int d = 0;
        for (int i = 0; i < n; ++i) d ^= a.get(i) & b.get(i);
        EXPECT_EQ(a.dot(b), bool(d));
        auto c = a;
        c ^= b;
        for (int i = 0; i < n; ++i) EXPECT_EQ(c.get(i), a.get(i) != b.get(i));
        std::vector<int> set;
        a.for_each_set([&](int i) { set.push_back(i); });
        EXPECT_EQ((int)set.size(), a.popcount());
    }
}

TEST(BitMatrix, TransposeAndProduct) {
    std::mt19937_64 rng(5);
    for (int it = 0; it < 100; ++it) {
        int r = 1 + rng() % 9, c = 1 + rng() % 9, k = 1 + rng() % 9;
        std::vector<BitVector> ar, br;
        for (int i = 0; i < r; ++i) ar.push_back(random_vec(c, rng));
        for (int i = 0; i < c; ++i) br.push_back(random_vec(k, rng));
        auto A = BitMatrix::from_rows(ar, c), B = BitMatrix::from_rows(br, k);
        auto AB = A * B;
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < k; ++j) {
                int s = 0;
                for (int l = 0; l < c; ++l) s ^= A.get(i, l) & B.get(l, j);
                EXPECT_EQ(AB.get(i, j), bool(s));
            }
        EXPECT_EQ(A.transpose().transpose().get(0, 0), A.get(0, 0));
        auto x = random_vec(c, rng);
        auto y = A * x;
        for (int i = 0; i < r; ++i) EXPECT_EQ(y.get(i), A.row(i).dot(x));
    }
}

TEST(Elimination, RankMatchesSpanSize) {
    std::mt19937_64 rng(6);
    for (int it = 0; it < 300; ++it) {
        int r = 1 + rng() % 7, c = 1 + rng() % 7;
        std::vector<BitVector> rows;
        for (int i = 0; i < r; ++i) rows.push_back(random_vec(c, rng));
        auto M = BitMatrix::from_rows(rows, c);
        auto E = gauss_eliminate(M);
        EXPECT_EQ(E.rank, span_rank(rows, c));
        // row_ops * M = echelon
        auto P = E.row_ops * M;
        for (int i = 0; i < r; ++i) EXPECT_EQ(P.row(i), E.echelon.row(i));
        // pivots are unit columns
        for (int i = 0; i < E.rank; ++i)
            for (int k = 0; k < r; ++k) EXPECT_EQ(E.echelon.get(k, E.col_pivots[i]), k == i);
    }
}

TEST(SpanSolver, SolvesExactlyTheSpan) {
    std::mt19937_64 rng(7);
    for (int it = 0; it < 300; ++it) {
        int n = 1 + rng() % 8, m = rng() % 6;
        std::vector<BitVector> vs;
        for (int j = 0; j < m; ++j) vs.push_back(random_vec(n, rng));
        SpanSolver S(vs, n);
        EXPECT_EQ(S.rank(), span_rank(vs, n));
        EXPECT_EQ(S.independent(), S.rank() == m);
        auto y = random_vec(n, rng);
        auto u = S.solve(y);
        // brute force membership
        bool in = false;
        for (uint64_t k = 0; k < (uint64_t(1) << m) && !in; ++k) {
            BitVector s(n);
            for (int j = 0; j < m; ++j)
                if ((k >> j) & 1) s ^= vs[j];
            in = s == y;
        }
        EXPECT_EQ(u.has_value(), in);
        if (u) {
            BitVector s(n);
            u->for_each_set([&](int j) { s ^= vs[j]; });
            EXPECT_EQ(s, y);
        }
    }
}

TEST(AffineSpace, MembershipAndCanonicalForm) {
    std::mt19937_64 rng(8);
    for (int it = 0; it < 200; ++it) {
        int n = 1 + rng() % 7, m = rng() % (n + 1);
        auto A = random_space(n, m, rng);
        auto pts = points(A);
        EXPECT_EQ(pts.size(), size_t(1) << m);
        for (uint64_t x = 0; x < (uint64_t(1) << n); ++x) {
            auto v = BitVector::from_index(n, x);
            auto u = A.membership(v);
            EXPECT_EQ(u.has_value(), pts.count(v.to_string()) == 1);
            if (u) EXPECT_EQ(A.point_at(*u), v);
        }
        auto C = A.canonical_with_transform();
        EXPECT_EQ(points(C.space), pts);
        EXPECT_EQ(C.space, A);
        // u = T w + t maps canonical coordinates to the original ones
        for (uint64_t k = 0; k < (uint64_t(1) << m); ++k) {
            BitVector w = BitVector::from_index(m, k), u(m);
            for (int i = 0; i < m; ++i)
                if (C.T[i].dot(w) ^ C.t.get(i)) u.set(i);
            EXPECT_EQ(A.point_at(u), C.space.point_at(w));
        }
        // a different basis of the same space has the same canonical form
        auto basis = A.basis();
        if (m >= 2) basis[0] ^= basis[1];
        BitVector h = A.shift();
        if (m >= 1) h ^= A.basis()[m - 1];
        EXPECT_EQ(AffineSpace(n, basis, h).canonical(), A.canonical());
    }
}

TEST(AffineSpace, RejectsDependentBasis) {
    auto v = BitVector::from_string("110");
    EXPECT_THROW(AffineSpace(3, {v, v}, BitVector(3)), std::invalid_argument);
}

TEST(AffineSpace, DualBasisCutsOutTheSpace) {
    std::mt19937_64 rng(9);
    for (int it = 0; it < 200; ++it) {
        int n = 1 + rng() % 7, m = rng() % (n + 1);
        auto A = random_space(n, m, rng);
        auto D = dual_basis(A);
        EXPECT_EQ(D.rows(), n - m);
        auto pts = points(A);
        for (uint64_t x = 0; x < (uint64_t(1) << n); ++x) {
            auto v = BitVector::from_index(n, x);
            bool sat = true;
            for (int r = 0; r < D.rows(); ++r) sat = sat && D.row(r).dot(v) == D.row(r).dot(A.shift());
            EXPECT_EQ(sat, pts.count(v.to_string()) == 1);
        }
    }
}

TEST(AffineSpace, IntersectionMatchesEnumeration) {
    std::mt19937_64 rng(10);
    for (int it = 0; it < 300; ++it) {
        int n = 1 + rng() % 6;
        auto A = random_space(n, rng() % (n + 1), rng), B = random_space(n, rng() % (n + 1), rng);
        auto pa = points(A), pb = points(B);
        std::set<std::string> both;
        for (auto& s : pa)
            if (pb.count(s)) both.insert(s);
        auto I = affine_intersection(A, B);
        EXPECT_EQ(I.has_value(), !both.empty());
        if (I) EXPECT_EQ(points(*I), both);
    }
}
