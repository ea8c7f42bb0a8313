#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stabilizer.hpp"

namespace tsim {

struct DecompositionTerm {
    ExactAmplitude coeff;
    StabilizerState state;
    std::string label;
};

struct MagicDecomposition {
    int k = 0;  // number of magic states
    std::vector<DecompositionTerm> terms;

    int qubits() const { return terms.empty() ? k : terms.front().state.n(); }
    size_t size() const { return terms.size(); }
};

namespace catalog_detail {

inline StabilizerState make_state(int n, const std::vector<std::string>& basis, const std::string& h,
                                  const std::vector<std::pair<int, int>>& J4, const std::vector<int>& D, int c,
                                  ExactAmplitude global) {
    std::vector<BitVector> b;
    for (auto& s : basis) b.push_back(BitVector::from_string(s));
    AffineSpace A(n, b, BitVector::from_string(h));
    PhaseForm f((int)b.size());
    for (auto [i, j] : J4) f.set_cross(i, j, true);
    for (size_t i = 0; i < D.size(); ++i) f.set_D((int)i, D[i]);
    f.set_c(c);
    return StabilizerState(A, f, global);
}

inline std::vector<std::pair<int, int>> all_pairs(int m) {
    std::vector<std::pair<int, int>> p;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) p.push_back({i, j});
    return p;
}

inline std::vector<std::string> identity_basis(int n) {
    std::vector<std::string> b;
    for (int i = 0; i < n; ++i) {
        std::string s(n, '0');
        s[i] = '1';
        b.push_back(s);
    }
    return b;
}

// e_0 + e_{i+1}, i = 0..n-2
inline std::vector<std::string> star_basis(int n) {
    std::vector<std::string> b;
    for (int i = 1; i < n; ++i) {
        std::string s(n, '0');
        s[0] = '1';
        s[i] = '1';
        b.push_back(s);
    }
    return b;
}

inline ExactAmplitude rt(i128 a, i128 b) { return {a, b, 0, 0, 0}; }

}  // namespace catalog_detail

inline MagicDecomposition t1_decomposition() {
    using namespace catalog_detail;
    auto h = ExactAmplitude::inv_sqrt2_pow(1);
    MagicDecomposition d{1, {}};
    d.terms.push_back({h, make_state(1, {}, "0", {}, {}, 0, ExactAmplitude::one()), "0"});
    d.terms.push_back({omega(1) * h, make_state(1, {}, "1", {}, {}, 0, ExactAmplitude::one()), "1"});
    return d;
}

inline MagicDecomposition t2_decomposition() {
    using namespace catalog_detail;
    auto h = ExactAmplitude::inv_sqrt2_pow(1);
    MagicDecomposition d{2, {}};
    // (|00> + i|11>)/√2 and (|01> + |10>)/√2
    d.terms.push_back({h, make_state(2, {"11"}, "00", {}, {2}, 0, h), "phi1"});
    d.terms.push_back({omega(1) * h, make_state(2, {"11"}, "01", {}, {0}, 0, h), "phi2"});
    return d;
}

inline MagicDecomposition t3_decomposition() {
    using namespace catalog_detail;
    const ExactAmplitude i = ExactAmplitude::imag_unit(), one = ExactAmplitude::one(), r2 = ExactAmplitude::sqrt2();
    const ExactAmplitude quarter = ExactAmplitude::inv_sqrt2_pow(4);
    auto c1 = -((one - i) * quarter) * (-one - i + r2) * omega(-1);
    auto c2 = -((one + i) * quarter) * (one - i + r2) * omega(1);
    auto c3 = -((one + i) * quarter) * (-one + i + r2) * omega(1);
    MagicDecomposition d{3, {}};
    // (|011> + i|100>)/√2
    d.terms.push_back({c1, make_state(3, {"111"}, "011", {}, {2}, 0, ExactAmplitude::inv_sqrt2_pow(1)), "psi1"});
    // (i,-1,-1,-i,i,-1,-1,-i)/(2√2)
    d.terms.push_back(
        {c2, make_state(3, identity_basis(3), "000", {}, {0, 2, 2}, 2, ExactAmplitude::inv_sqrt2_pow(3)), "psi2"});
    // (i,1,1,i,i,-1,-1,i)/(2√2)
    d.terms.push_back(
        {c3, make_state(3, identity_basis(3), "000", all_pairs(3), {0, 6, 6}, 2, ExactAmplitude::inv_sqrt2_pow(3)),
         "psi3"});
    return d;
}

namespace catalog_detail {

struct T6Parts {
    StabilizerState b60, b66, e6, o6, k6, phi1, phi2;
    ExactAmplitude cb60, cb66, ce6, co6, ck6, cphi;
};

inline T6Parts t6_parts() {
    T6Parts p;
    const auto G = star_basis(6);
    const auto norm5 = ExactAmplitude::inv_sqrt2_pow(5);
    p.b60 = make_state(6, identity_basis(6), "000000", {}, std::vector<int>(6, 0), 0, ExactAmplitude::inv_sqrt2_pow(6));
    p.b66 = make_state(6, identity_basis(6), "000000", {}, std::vector<int>(6, 4), 4, ExactAmplitude::inv_sqrt2_pow(6));
    p.e6 = make_state(6, G, "100000", all_pairs(5), std::vector<int>(5, 0), 4, norm5);
    p.o6 = make_state(6, G, "000000", all_pairs(5), std::vector<int>(5, 4), 4, norm5);
    p.k6 = make_state(6, {"111111"}, "111111", {}, {2}, 6, ExactAmplitude::inv_sqrt2_pow(1));
    p.phi1 = make_state(6, G, "100000", {{0, 1}, {0, 4}, {1, 2}, {2, 3}, {3, 4}}, std::vector<int>(5, 0), 0, norm5);
    p.phi2 = make_state(6, G, "100000", {{0, 2}, {0, 3}, {1, 3}, {1, 4}, {2, 4}}, std::vector<int>(5, 0), 0, norm5);

    // cos^6(π/8) = (10 + 7√2)/32, e^{6πi/8} = ω^3
    const ExactAmplitude K = ExactAmplitude(10, 7, 0, 0, 10) * omega(3);
    const ExactAmplitude s52 = ExactAmplitude::sqrt2_pow(5), s6 = ExactAmplitude::sqrt2_pow(6);
    p.cb60 = rt(-16, 12) * K;
    p.cb66 = rt(96, -68) * K;
    p.ce6 = rt(10, -7) * K * s52;
    p.co6 = rt(-14, 10) * K * s52 * omega(6);
    p.ck6 = rt(7, -5) * K * s6 * omega(1);
    p.cphi = rt(10, -7) * K * s52 * omega(6);
    return p;
}

}  // namespace catalog_detail

inline MagicDecomposition t6_decomposition() {
    auto p = catalog_detail::t6_parts();
    MagicDecomposition d{6, {}};
    d.terms = {{p.cb60, p.b60, "b60"}, {p.cb66, p.b66, "b66"}, {p.ce6, p.e6, "e6"},   {p.co6, p.o6, "o6"},
               {p.ck6, p.k6, "k6"},    {p.cphi, p.phi1, "phi1"}, {p.cphi, p.phi2, "phi2"}};
    return d;
}

// The two 12-qubit merged states
inline StabilizerState merged_b60_b66() {
    using namespace catalog_detail;
    std::vector<int> D(11, 0);
    for (int i = 5; i < 11; ++i) D[i] = 4;
    return make_state(12, star_basis(12), std::string(12, '0'), {}, D, 4, ExactAmplitude::inv_sqrt2_pow(11));
}
inline StabilizerState merged_e6_o6() {
    using namespace catalog_detail;
    return make_state(12, star_basis(12), "1" + std::string(11, '0'), all_pairs(11), std::vector<int>(11, 0), 0,
                      ExactAmplitude::inv_sqrt2_pow(11));
}

inline MagicDecomposition tensor(const MagicDecomposition& a, const MagicDecomposition& b) {
    MagicDecomposition d{a.k + b.k, {}};
    d.terms.reserve(a.size() * b.size());
    for (auto& x : a.terms)
        for (auto& y : b.terms)
            d.terms.push_back({x.coeff * y.coeff, tensor(x.state, y.state), x.label + "." + y.label});
    return d;
}

inline MagicDecomposition t12_decomposition() {
    auto t6 = t6_decomposition();
    auto p = catalog_detail::t6_parts();
    const ExactAmplitude r2 = ExactAmplitude::sqrt2();
    MagicDecomposition d{12, {}};
    for (auto& x : t6.terms)
        for (auto& y : t6.terms) {
            auto pair = x.label + "." + y.label;
            if (pair == "b60.b66")
                d.terms.push_back({r2 * p.cb60 * p.cb66, merged_b60_b66(), "b60b66"});
            else if (pair == "e6.o6")
                d.terms.push_back({r2 * p.ce6 * p.co6, merged_e6_o6(), "e6o6"});
            else if (pair == "b66.b60" || pair == "o6.e6")
                continue;
            else
                d.terms.push_back({x.coeff * y.coeff, tensor(x.state, y.state), pair});
        }
    return d;
}

inline MagicDecomposition catalog_entry(int k) {
    switch (k) {
        case 1: return t1_decomposition();
        case 2: return t2_decomposition();
        case 3: return t3_decomposition();
        case 6: return t6_decomposition();
        case 12: return t12_decomposition();
        default: throw std::invalid_argument("no catalog entry for k=" + std::to_string(k));
    }
}

inline MagicDecomposition extend_with_zeros(const MagicDecomposition& d, int n) {
    int have = d.qubits();
    if (n < have) throw std::invalid_argument("extend_with_zeros: n smaller than the decomposition");
    if (n == have) return d;
    auto z = StabilizerState::zeros(n - have);
    MagicDecomposition r{d.k, {}};
    for (auto& t : d.terms) r.terms.push_back({t.coeff, tensor(t.state, z), t.label});
    return r;
}

// Empty decomposition of |> on zero qubits
inline MagicDecomposition trivial_decomposition() {
    return MagicDecomposition{0, {{ExactAmplitude::one(), StabilizerState::zeros(0), "1"}}};
}

inline std::vector<int> default_policy() { return {12, 6, 3, 2, 1}; }

// Greedy cover of t by the allowed block sizes, largest first.
inline std::vector<int> plan_blocks(int t, std::vector<int> policy) {
    if (t < 0) throw std::invalid_argument("plan_blocks: negative t");
    std::sort(policy.begin(), policy.end(), std::greater<int>());
    for (int b : policy)
        if (b != 1 && b != 2 && b != 3 && b != 6 && b != 12)
            throw std::invalid_argument("block size " + std::to_string(b) + " has no catalog entry");
    std::vector<int> blocks;
    int rest = t;
    for (int b : policy)
        while (rest >= b) {
            blocks.push_back(b);
            rest -= b;
        }
    if (rest) throw std::invalid_argument("policy cannot cover t=" + std::to_string(t));
    return blocks;
}

// Tensor of catalog blocks plus trailing |0>s, enumerated lazily.
class BlockedDecomposition {
public:
    BlockedDecomposition(int t, int n, const std::vector<int>& policy) : t_(t), n_(n) {
        if (n < t) throw std::invalid_argument("total qubits must be at least t");
        std::map<int, MagicDecomposition> cache;
        for (int b : plan_blocks(t, policy)) {
            if (!cache.count(b)) cache[b] = catalog_entry(b);
            blocks_.push_back(cache[b]);
        }
    }
    int t() const { return t_; }
    int qubits() const { return n_; }
    const std::vector<MagicDecomposition>& blocks() const { return blocks_; }
    size_t size() const {
        size_t s = 1;
        for (auto& b : blocks_) s *= b.size();
        return s;
    }
    // last block varies fastest
    DecompositionTerm term(size_t idx) const {
        std::vector<size_t> digit(blocks_.size());
        for (size_t b = blocks_.size(); b-- > 0;) {
            digit[b] = idx % blocks_[b].size();
            idx /= blocks_[b].size();
        }
        DecompositionTerm r{ExactAmplitude::one(), StabilizerState::zeros(0), ""};
        for (size_t b = 0; b < blocks_.size(); ++b) {
            auto& x = blocks_[b].terms[digit[b]];
            r.coeff = r.coeff * x.coeff;
            r.state = tensor(r.state, x.state);
            r.label += (b ? "|" : "") + x.label;
        }
        if (n_ > t_) r.state = tensor(r.state, StabilizerState::zeros(n_ - t_));
        return r;
    }
    MagicDecomposition materialize() const {
        MagicDecomposition d{t_, {}};
        for (size_t i = 0; i < size(); ++i) d.terms.push_back(term(i));
        return d;
    }

private:
    int t_, n_;
    std::vector<MagicDecomposition> blocks_;
};

inline MagicDecomposition block_decomposition(int t, const std::vector<int>& policy = default_policy()) {
    return BlockedDecomposition(t, t, policy).materialize();
}

// Σ c_j |s_j> as an exact dense vector
inline std::vector<ExactAmplitude> reconstruct_exact(const MagicDecomposition& d) {
    std::vector<ExactAmplitude> v(size_t(1) << d.qubits());
    for (auto& t : d.terms) {
        auto s = to_dense_exact(t.state);
        for (size_t i = 0; i < v.size(); ++i)
            if (!s[i].is_zero()) v[i] += t.coeff * s[i];
    }
    return v;
}

// Σ c_j* c_l <s_j|s_l> using only kernel inner products
inline ExactAmplitude norm_via_kernel(const MagicDecomposition& d) {
    ExactAmplitude acc;
    for (auto& a : d.terms)
        for (auto& b : d.terms) acc += a.coeff.conj() * b.coeff * inner_product(a.state, b.state);
    return acc;
}

// ---- text format ----

inline void write_decomposition(std::ostream& os, const MagicDecomposition& d, const std::string& note = "") {
    if (!note.empty()) {
        std::istringstream in(note);
        std::string line;
        while (std::getline(in, line)) os << "# " << line << "\n";
    }
    os << "k=" << d.k << " terms=" << d.size() << "\n";
    for (auto& t : d.terms) {
        const auto& s = t.state;
        os << "term label=" << (t.label.empty() ? "-" : t.label) << "\n";
        os << "coeff=" << t.coeff.to_tuple() << "\n";
        os << "state n=" << s.n() << " m=" << s.m() << "\n";
        os << "G=";
        for (int j = 0; j < s.m(); ++j) os << (j ? "," : "") << s.space().basis()[j].to_string();
        os << "\nh=" << s.space().shift().to_string() << "\nJ=";
        for (int i = 0; i < s.m(); ++i)
            for (int j = i + 1; j < s.m(); ++j) os << s.J(i, j);
        os << "\nD=";
        for (int i = 0; i < s.m(); ++i) os << s.D(i);
        os << "\nc=" << s.c() << "\nglobal=" << s.global().to_tuple() << "\n";
    }
}

inline MagicDecomposition read_decomposition(std::istream& is) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        lines.push_back(line);
    }
    size_t pos = 0;
    auto fail = [&](const std::string& what) {
        throw std::invalid_argument("decomposition file, record " + std::to_string(pos + 1) + ": " + what);
    };
    auto value = [&](const std::string& key) {
        if (pos >= lines.size()) fail("unexpected end of file, wanted " + key);
        const std::string& l = lines[pos];
        if (l.rfind(key + "=", 0) != 0) fail("expected " + key + "=");
        ++pos;
        return l.substr(key.size() + 1);
    };
    auto field = [&](const std::string& l, const std::string& key) {
        size_t p = l.find(key + "=");
        if (p == std::string::npos) fail("missing " + key);
        size_t e = l.find(' ', p);
        return l.substr(p + key.size() + 1, e == std::string::npos ? std::string::npos : e - p - key.size() - 1);
    };
    if (lines.empty()) fail("empty file");
    MagicDecomposition d;
    d.k = std::stoi(field(lines[0], "k"));
    int terms = std::stoi(field(lines[0], "terms"));
    pos = 1;
    for (int t = 0; t < terms; ++t) {
        if (pos >= lines.size() || lines[pos].rfind("term", 0) != 0) fail("expected term header");
        std::string label = field(lines[pos], "label");
        ++pos;
        ExactAmplitude coeff = ExactAmplitude::from_tuple(value("coeff"));
        if (pos >= lines.size() || lines[pos].rfind("state", 0) != 0) fail("expected state header");
        int n = std::stoi(field(lines[pos], "n")), m = std::stoi(field(lines[pos], "m"));
        ++pos;
        std::string Gs = value("G");
        std::vector<BitVector> basis;
        std::stringstream gs(Gs);
        std::string item;
        while (std::getline(gs, item, ','))
            if (!item.empty()) basis.push_back(BitVector::from_string(item));
        if ((int)basis.size() != m) fail("G has " + std::to_string(basis.size()) + " vectors, expected " + std::to_string(m));
        BitVector h = BitVector::from_string(value("h"));
        std::string Js = value("J"), Ds = value("D");
        if ((int)Js.size() != m * (m - 1) / 2 || (int)Ds.size() != m) fail("J or D has the wrong length");
        PhaseForm f(m);
        for (int i = 0, k = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j, ++k) {
                if (Js[k] != '0' && Js[k] != '4') fail("J entries must be 0 or 4");
                f.set_cross(i, j, Js[k] == '4');
            }
        for (int i = 0; i < m; ++i) f.set_D(i, Ds[i] - '0');
        f.set_c(std::stoi(value("c")));
        ExactAmplitude g = ExactAmplitude::from_tuple(value("global"));
        d.terms.push_back({coeff, StabilizerState(AffineSpace(n, basis, h), f, g), label == "-" ? "" : label});
    }
    return d;
}

inline std::string catalog_note(int k) {
    if (k == 6 || k == 12)
        return "Coefficients: c = r * cos^6(pi/8) * e^{3 pi i/4} * s * theta with cos^6(pi/8) = (10+7sqrt2)/32,\n"
               "r: b60 -16+12sqrt2, b66 96-68sqrt2, e6 10-7sqrt2, o6 -14+10sqrt2, k6 7-5sqrt2, phi 10-7sqrt2,\n"
               "s = 1 (b60,b66), 2^{5/2} (e6,o6,phi), 2^3 (k6),\n"
               "theta = 1 except o6: -i, k6: e^{i pi/4}, phi', phi'': -i.\n"
               "The per-term phases theta are needed; a single global phase does not reconstruct |T>^6.\n" +
               std::string(k == 12 ? "Merged states: b60b66 has shift 0, e6o6 has shift e1; each carries sqrt2 * c * c.\n"
                                   : "");
    return "";
}

}  // namespace tsim
