#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "catalog.hpp"
#include "parallel.hpp"
#include "pauli.hpp"
#include "phase_ring.hpp"

namespace tsim {

// G_m(A, v, c) = Σ_x exp[(πi/2^m)(x A x^T + 2 v x^T + c)], x over {0,1}^dim, m ≤ 2.
inline ExactAmplitude gauss_sum_eval(int dim, int level, const std::vector<std::vector<int>>& A, const std::vector<int>& v,
                                     int c) {
    if (dim < 0 || dim > 24) throw std::invalid_argument("gauss_sum_eval: dim must be in 0..24");
    if (level < 0 || level > 2) throw std::invalid_argument("gauss_sum_eval: level must be 0, 1 or 2");
    if ((int)A.size() != dim || (int)v.size() != dim) throw std::invalid_argument("gauss_sum_eval: shape mismatch");
    for (auto& row : A)
        if ((int)row.size() != dim) throw std::invalid_argument("gauss_sum_eval: A must be square");
    const int scale = 1 << (2 - level);  // exponent in units of π/4
    std::array<uint64_t, 8> hits{};
    for (uint64_t x = 0; x < (uint64_t(1) << dim); ++x) {
        long q = c + 0;
        for (int i = 0; i < dim; ++i) {
            if (!((x >> i) & 1)) continue;
            q += 2L * v[i];
            for (int j = 0; j < dim; ++j)
                if ((x >> j) & 1) q += A[i][j];
        }
        hits[(((q * scale) % 8) + 8) % 8]++;
    }
    ExactAmplitude s;
    for (int k = 0; k < 8; ++k)
        if (hits[k]) s += ExactAmplitude::integer((i128)hits[k]) * omega(k);
    return s;
}

struct GaussSumTerm {
    std::string family;  // delta-gated set and loop indices, e.g. "B(x=1,y=0)"
    int dimension = 0;
    ExactAmplitude value;  // includes the block's normalization
    int64_t multiplicity = 1;
    // bookkeeping for block composition
    bool odd = false;
    bool all_range = true;
};

struct GaussSumReport {
    int k = 0;
    std::string active_set;
    ExactAmplitude exact;
    int unique_nonzero_sums = 0;
    std::vector<GaussSumTerm> terms;

    double expectation() const { return exact.to_complex().real(); }
};

namespace gauss_detail {

struct Site {
    int a, b, g, d;  // I, Z, X, Y indicators
};

inline Site site(char c) {
    switch (c) {
        case 'I': return {1, 0, 0, 0};
        case 'Z': return {0, 1, 0, 0};
        case 'X': return {0, 0, 1, 0};
        case 'Y': return {0, 0, 0, 1};
    }
    throw std::invalid_argument("bad Pauli site");
}

inline bool delta(int x) { return (x & 1) == 0; }
inline ExactAmplitude ph(int k) { return omega(2 * k); }  // i^k
inline ExactAmplitude G1a(int a) { return ExactAmplitude::one() + omega(2 * a); }
inline ExactAmplitude G1av(int a, int v) { return ExactAmplitude::one() + omega(2 * (a + 2 * v)); }

// sum range [lo, hi] read mod 2
inline std::vector<int> range2(int lo, int hi) {
    lo &= 1;
    hi &= 1;
    if (lo == hi) return {lo};
    return {0, 1};
}

inline std::string tag(char set, int x, int y) {
    return std::string(1, set) + "(x=" + std::to_string(x) + ",y=" + std::to_string(y) + ")";
}

inline GaussSumReport finish(int k, std::string active, std::vector<GaussSumTerm> terms) {
    GaussSumReport r;
    r.k = k;
    r.active_set = std::move(active);
    for (auto& t : terms) {
        if (t.value.is_zero()) continue;
        r.exact += ExactAmplitude::integer(t.multiplicity) * t.value;
        r.unique_nonzero_sums++;
    }
    r.terms = std::move(terms);
    return r;
}

inline void check_size(const PauliOperator& P, int k) {
    if (P.size() != k)
        throw std::invalid_argument("block evaluator for k=" + std::to_string(k) + " given " + std::to_string(P.size()) +
                                    " qubits");
}

// All four sets of the three-qubit expression, gated by their deltas.
inline std::map<char, std::vector<GaussSumTerm>> k3_sets(const PauliOperator& P) {
    auto [a1, b1, g1, d1] = site(P.site(0));
    auto [a2, b2, g2, d2] = site(P.site(1));
    auto [a3, b3, g3, d3] = site(P.site(2));
    (void)a1;
    (void)a2;
    const ExactAmplitude norm = ExactAmplitude::inv_sqrt2_pow(6);  // 1/8
    const ExactAmplitude smi = omega(-1);
    const bool s12 = delta(g1 + d1 - g2 - d2);

    auto Gc1 = [&](int x, int y) {
        int yy = (y + 1) * (y + 1);
        return ph((d2 - g1) * yy + 2 * (b1 + b2 + g1 + d2) * x * yy + 2 * (d1 + d2 + b1 + b2) * x * y +
                  (2 * b1 + 3 * d1 + d2) * y);
    };
    auto gate = [&](bool on, ExactAmplitude v) { return on ? v * norm : ExactAmplitude::zero(); };

    std::map<char, std::vector<GaussSumTerm>> sets;
    for (int y : {0, 1})
        for (int x : range2(y * b2, y * (g1 + g2) + (y + 1) * (g1 + d2) + y * b2)) {
            int e = 1 - y * (g1 - g2) * (g1 - g2) - (y - 1) * (y - 1) * (g1 - d2) * (g1 - d2);
            int64_t m = int64_t(1) << e;
            bool allR = m == 2, odd = m == 1 && x == 1;
            sets['A'].push_back({tag('A', x, y), 2, gate(s12 && delta(g3 + d3), Gc1(x, y) * G1a(2 * b3)), m, odd, allR});
            sets['B'].push_back(
                {tag('B', x, y), 2, gate(s12 && delta(a3 + b3), Gc1(x, y) * smi * G1a(g3 + d3)), m, odd, allR});
        }
    for (int x : range2(0, 1 + b3))
        for (int y : range2(0, 1 + a3)) {
            auto v = smi * ph(2 * b3 * y + (x + 1) * (x + 1) * (d1 + g2 + 2 * b2) + x * (d1 + d2)) *
                     G1av(1, b1 + b2 + d1 + (x + 1) * g2 + x * d2);
            sets['C'].push_back({tag('C', x, y), 2, gate(!s12 && delta(g3 + d3), v), 2, false, true});
        }
    for (int y : {0, 1})
        for (int x : range2(y * (d1 + d2), 1 + y * (g1 + g2))) {
            int e = (y - 1) * (y - 1) * (x * x * (g1 + d2) + (x - 1) * (x - 1) * (g2 + d1));
            int64_t m = int64_t(1) << e;
            int w = g2 * (y + 1) + d2 * y;
            auto v = omega(6) *
                     ph(y * (d1 + d2) + (y + 1) * (y + 1) * (d1 + g2 + 2 * b2) + x * x + 2 * (b1 + b2 + d1 + w) * x) *
                     G1av(0, g3 + d3 + b1 + b2 + d1 + w + x);
            sets['D'].push_back({tag('D', x, y), 2, gate(!s12 && delta(a3 + b3), v), m, m == 1 && y == 1, m == 2});
        }
    return sets;
}

inline char k3_active(const PauliOperator& P) {
    auto s1 = site(P.site(0)), s2 = site(P.site(1)), s3 = site(P.site(2));
    bool s12 = delta(s1.g + s1.d - s2.g - s2.d);
    bool zlike = delta(s3.g + s3.d);
    return s12 ? (zlike ? 'A' : 'B') : (zlike ? 'C' : 'D');
}

// Tensor of two blocks' active sets. With reduce, pairs whose left factor has a
// restricted odd index and whose right factor is restricted are folded into their
// partners, doubling the partner's multiplicity.
inline std::vector<GaussSumTerm> compose(const std::vector<GaussSumTerm>& L, const std::vector<GaussSumTerm>& R,
                                         bool reduce) {
    std::vector<GaussSumTerm> out;
    out.reserve(L.size() * R.size());
    for (auto& a : L)
        for (auto& b : R) {
            if (reduce && a.odd && !b.all_range) continue;
            int64_t f = reduce && !a.all_range && !b.all_range ? 2 : 1;
            out.push_back({a.family + "*" + b.family, a.dimension + b.dimension, a.value * b.value,
                           a.multiplicity * b.multiplicity * f, a.odd || b.odd, a.all_range && b.all_range});
        }
    return out;
}

}  // namespace gauss_detail

inline GaussSumReport expect_block_k1(const PauliOperator& P) {
    using namespace gauss_detail;
    check_size(P, 1);
    auto [a, b, g, d] = site(P.site(0));
    const ExactAmplitude h = ExactAmplitude::inv_sqrt2_pow(2);
    std::vector<GaussSumTerm> terms;
    bool A = delta(g + d), B = delta(a + b);
    char active = A ? 'A' : 'B';
    if (A) {
        terms.push_back({"A(x=0)", 1, h, 1});
        terms.push_back({"A(x=1)", 1, omega(4 * b) * h, 1});
    } else if (B) {
        terms.push_back({"B(x=0)", 1, omega(1) * ph(-d) * h, 1});
        terms.push_back({"B(x=1)", 1, omega(-1) * ph(d) * h, 1});
    }
    return finish(1, std::string(1, active), terms);
}

inline GaussSumReport expect_block_k2(const PauliOperator& P) {
    using namespace gauss_detail;
    check_size(P, 2);
    auto [a1, b1, g1, d1] = site(P.site(0));
    auto [a2, b2, g2, d2] = site(P.site(1));
    (void)a1;
    (void)a2;
    const ExactAmplitude q = ExactAmplitude::inv_sqrt2_pow(4);
    std::vector<GaussSumTerm> terms;
    char active;
    if (delta(g1 + d1 - g2 - d2)) {
        active = 'A';
        terms.push_back({"A(x=0)", 1, ph(d2 - g1) * G1a(2 * (b1 + b2 + g1 + d2)) * q, 1});
        terms.push_back({"A(x=1)", 1, omega(4 * (b1 + d1)) * ph(d1 + d2) * G1a(2 * (b1 + d1 + b2 + d2)) * q, 1});
    } else {
        active = 'B';
        terms.push_back(
            {"B(x=0)", 1, omega(1) * omega(4 * (b2 + g2)) * ph(d1 - g2) * omega(6) * G1av(1, b2 + g2 + b1 + d1) * q, 1});
        terms.push_back({"B(x=1)", 1, omega(-1) * ph(d1 + d2) * G1av(1, b1 + b2 + d1 + d2) * q, 1});
    }
    return finish(2, std::string(1, active), terms);
}

inline GaussSumReport expect_block_k3(const PauliOperator& P) {
    using namespace gauss_detail;
    check_size(P, 3);
    char s = k3_active(P);
    return finish(3, std::string(1, s), k3_sets(P)[s]);
}

namespace gauss_detail {

inline std::pair<std::string, std::vector<GaussSumTerm>> k6_terms(const PauliOperator& P) {
    auto L = P.slice(0, 3), R = P.slice(3, 3);
    char sl = k3_active(L), sr = k3_active(R);
    bool reduce = sl != 'C' && sr != 'C';
    return {std::string{sl, sr}, compose(k3_sets(L)[sl], k3_sets(R)[sr], reduce)};
}

}  // namespace gauss_detail

inline GaussSumReport expect_block_k6(const PauliOperator& P) {
    gauss_detail::check_size(P, 6);
    auto [s, t] = gauss_detail::k6_terms(P);
    return gauss_detail::finish(6, s, std::move(t));
}

inline GaussSumReport expect_block_k12(const PauliOperator& P) {
    using namespace gauss_detail;
    check_size(P, 12);
    auto [sl, tl] = k6_terms(P.slice(0, 6));
    auto [sr, tr] = k6_terms(P.slice(6, 6));
    std::string s = sl + sr;
    bool reduce = s.find('C') == std::string::npos;
    return finish(12, s, compose(tl, tr, reduce));
}

inline GaussSumReport expect_block(const PauliOperator& P) {
    switch (P.size()) {
        case 1: return expect_block_k1(P);
        case 2: return expect_block_k2(P);
        case 3: return expect_block_k3(P);
        case 6: return expect_block_k6(P);
        case 12: return expect_block_k12(P);
    }
    throw std::invalid_argument("no Gauss-sum evaluator for block size " + std::to_string(P.size()));
}

struct SinglePauliReport {
    ExactAmplitude exact;  // <T^t 0^(n-t)| P |T^t 0^(n-t)>
    std::vector<int> blocks;
    std::vector<GaussSumReport> block_reports;
    uint64_t unique_nonzero_sums = 1;  // product over blocks

    double value() const { return exact.to_complex().real(); }
};

// P acts on t magic qubits followed by n - t qubits in |0>. The phase of P is included.
inline SinglePauliReport expect_single_pauli(int t, const PauliOperator& P,
                                             const std::vector<int>& policy = default_policy()) {
    if (t < 0 || t > P.size()) throw std::invalid_argument("expect_single_pauli: t must be in 0..n");
    SinglePauliReport r;
    r.blocks = plan_blocks(t, policy);
    r.exact = omega(2 * P.omega_power());
    int pos = 0;
    for (int b : r.blocks) {
        auto rep = expect_block(P.slice(pos, b));
        pos += b;
        r.exact = r.exact * rep.exact;
        r.unique_nonzero_sums *= (uint64_t)rep.unique_nonzero_sums;
        r.block_reports.push_back(std::move(rep));
    }
    // <0|Q|0> is 1 for I, Z and 0 for X, Y
    for (int i = t; i < P.size(); ++i)
        if (P.site(i) == 'X' || P.site(i) == 'Y') r.exact = ExactAmplitude::zero();
    return r;
}

struct CensusResult {
    int k = 0;
    uint64_t evaluated = 0;
    int max_count = 0;
    PauliOperator worst;  // first Pauli (in evaluation order) attaining the maximum
    std::map<int, uint64_t> histogram;
};

inline PauliOperator pauli_from_index(int k, uint64_t idx) {
    static const char kinds[4] = {'I', 'Z', 'X', 'Y'};
    std::string s(k, 'I');
    for (int i = k - 1; i >= 0; --i, idx >>= 2) s[i] = kinds[idx & 3];
    return PauliOperator(s, 0);
}

// samples == 0 means exhaustive
inline CensusResult rank_census(int k, uint64_t samples, uint64_t seed, int threads = 1) {
    if (k != 1 && k != 2 && k != 3 && k != 6 && k != 12)
        throw std::invalid_argument("census: k must be one of 1, 2, 3, 6, 12");
    bool exhaustive = samples == 0;
    if (exhaustive && k > 6) throw std::invalid_argument("census: exhaustive enumeration only for k <= 6");
    uint64_t count = exhaustive ? (uint64_t(1) << (2 * k)) : samples;
    auto pauli_at = [&](uint64_t i) {
        if (exhaustive) return pauli_from_index(k, i);
        auto rng = item_rng(seed, i);
        return random_pauli(k, rng);
    };
    std::vector<int> counts(count);
    parallel_for(count, threads, [&](size_t i) { counts[i] = expect_block(pauli_at(i)).unique_nonzero_sums; });
    CensusResult r;
    r.k = k;
    r.evaluated = count;
    uint64_t worst_idx = 0;
    for (uint64_t i = 0; i < count; ++i) {
        r.histogram[counts[i]]++;
        if (counts[i] > r.max_count) {
            r.max_count = counts[i];
            worst_idx = i;
        }
    }
    r.worst = pauli_at(worst_idx);
    return r;
}

}  // namespace tsim
