#pragma once

#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gf2.hpp"
#include "phase_ring.hpp"

namespace tsim {

// One of I, Z, X, Y per site and a global phase i^w.
class PauliOperator {
public:
    PauliOperator() = default;
    explicit PauliOperator(int n) : sites_(n, 'I') {}
    PauliOperator(std::string sites, int w) : sites_(std::move(sites)), w_(((w % 4) + 4) % 4) {
        for (size_t i = 0; i < sites_.size(); ++i)
            if (std::string("IZXY").find(sites_[i]) == std::string::npos)
                throw std::invalid_argument("Pauli: bad site character at position " + std::to_string(i));
    }

    // "XYZ", "-XYZ", "-i:XYZI", "+1:ZZ"
    static PauliOperator parse(const std::string& text) {
        std::string s = text;
        int w = 0;
        size_t colon = s.find(':');
        size_t body = 0;
        if (colon != std::string::npos) {
            std::string tok = s.substr(0, colon);
            if (tok == "+1" || tok == "1" || tok == "+") w = 0;
            else if (tok == "-1" || tok == "-") w = 2;
            else if (tok == "+i" || tok == "i") w = 1;
            else if (tok == "-i") w = 3;
            else throw std::invalid_argument("Pauli: bad phase token \"" + tok + "\" at position 0");
            body = colon + 1;
        } else if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
            w = s[0] == '-' ? 2 : 0;
            body = 1;
        }
        std::string sites = s.substr(body);
        if (sites.empty()) throw std::invalid_argument("Pauli: empty operator at position " + std::to_string(body));
        for (size_t i = 0; i < sites.size(); ++i)
            if (std::string("IZXY").find(sites[i]) == std::string::npos)
                throw std::invalid_argument("Pauli: bad site character '" + std::string(1, sites[i]) +
                                            "' at position " + std::to_string(body + i));
        return PauliOperator(sites, w);
    }
    std::string to_string() const {
        static const char* tok[4] = {"+1", "+i", "-1", "-i"};
        return std::string(tok[w_]) + ":" + sites_;
    }

    int size() const { return (int)sites_.size(); }
    char site(int i) const { return sites_[i]; }
    void set_site(int i, char c) { sites_[i] = c; }
    const std::string& sites() const { return sites_; }
    int omega_power() const { return w_; }  // ω = i^w
    void set_omega_power(int w) { w_ = ((w % 4) + 4) % 4; }
    bool hermitian() const { return w_ % 2 == 0; }

    int alpha(int i) const { return sites_[i] == 'I'; }
    int beta(int i) const { return sites_[i] == 'Z'; }
    int gamma(int i) const { return sites_[i] == 'X'; }
    int delta(int i) const { return sites_[i] == 'Y'; }

    // flip mask (X or Y) and sign mask (Z or Y)
    BitVector x_mask() const {
        BitVector v(size());
        for (int i = 0; i < size(); ++i)
            if (sites_[i] == 'X' || sites_[i] == 'Y') v.set(i);
        return v;
    }
    BitVector z_mask() const {
        BitVector v(size());
        for (int i = 0; i < size(); ++i)
            if (sites_[i] == 'Z' || sites_[i] == 'Y') v.set(i);
        return v;
    }
    int y_count() const {
        int c = 0;
        for (char ch : sites_) c += ch == 'Y';
        return c;
    }
    // P|x> = e^{iπ/4 (base + 4 z·x)} |x ^ xmask>
    int base_phase() const { return (2 * w_ + 2 * y_count()) % 8; }

    PauliOperator slice(int from, int len) const { return PauliOperator(sites_.substr(from, len), 0); }

    friend bool operator==(const PauliOperator&, const PauliOperator&) = default;
    friend auto operator<=>(const PauliOperator&, const PauliOperator&) = default;

private:
    std::string sites_;
    int w_ = 0;
};

inline std::pair<BitVector, EighthRootPhase> pauli_on_basis(const PauliOperator& P, const BitVector& x) {
    if (x.size() != P.size()) throw std::invalid_argument("pauli_on_basis: length mismatch");
    int k = P.base_phase() + (P.z_mask().dot(x) ? 4 : 0);
    return {x ^ P.x_mask(), EighthRootPhase(k)};
}

inline bool commute(const PauliOperator& P, const PauliOperator& Q) {
    if (P.size() != Q.size()) throw std::invalid_argument("commute: size mismatch");
    return P.x_mask().dot(Q.z_mask()) == P.z_mask().dot(Q.x_mask());
}

template <class Rng>
PauliOperator random_pauli(int n, Rng& rng) {
    if (n < 1) throw std::invalid_argument("random_pauli: n must be >= 1");
    static const char kinds[4] = {'I', 'Z', 'X', 'Y'};
    std::string s(n, 'I');
    uint64_t bits = 0;
    int avail = 0;
    for (int i = 0; i < n; ++i) {
        if (avail < 2) {
            bits = rng();
            avail = 64;
        }
        s[i] = kinds[bits & 3];
        bits >>= 2;
        avail -= 2;
    }
    return PauliOperator(s, 0);
}

// Product of (I + s_i P_i)/2 over commuting Hermitian factors.
class PauliProjector {
public:
    PauliProjector() = default;
    explicit PauliProjector(int n) : n_(n) {}
    PauliProjector(int n, std::vector<std::pair<PauliOperator, int>> factors) : n_(n), f_(std::move(factors)) {
        validate();
    }
    void add(const PauliOperator& P, int sign) {
        f_.push_back({P, sign});
        try {
            validate();
        } catch (...) {
            f_.pop_back();
            throw;
        }
    }
    int qubits() const { return n_; }
    const std::vector<std::pair<PauliOperator, int>>& factors() const { return f_; }

    // "+XXI,-ZZZ"; an optional phase token is folded into the sign
    static PauliProjector parse(const std::string& text) {
        std::vector<std::pair<PauliOperator, int>> fs;
        size_t start = 0;
        int n = -1;
        while (start <= text.size()) {
            size_t comma = text.find(',', start);
            std::string part = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            PauliOperator P;
            try {
                P = PauliOperator::parse(part);
            } catch (const std::invalid_argument& e) {
                throw std::invalid_argument(std::string(e.what()) + " (in factor starting at position " +
                                            std::to_string(start) + ")");
            }
            int sign = 1;
            if (P.omega_power() == 2) sign = -1;
            else if (P.omega_power() != 0)
                throw std::invalid_argument("projector factor at position " + std::to_string(start) +
                                            " is not Hermitian");
            P.set_omega_power(0);
            if (n < 0) n = P.size();
            else if (n != P.size())
                throw std::invalid_argument("projector factor at position " + std::to_string(start) +
                                            " has a different qubit count");
            fs.push_back({P, sign});
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        return PauliProjector(n, fs);
    }

private:
    void validate() const {
        if ((int)f_.size() > n_) throw std::invalid_argument("PauliProjector: more factors than qubits");
        for (size_t i = 0; i < f_.size(); ++i) {
            if (f_[i].first.size() != n_) throw std::invalid_argument("PauliProjector: factor size mismatch");
            if (!f_[i].first.hermitian()) throw std::invalid_argument("PauliProjector: non-Hermitian factor");
            if (f_[i].second != 1 && f_[i].second != -1) throw std::invalid_argument("PauliProjector: sign must be +-1");
            for (size_t j = 0; j < i; ++j)
                if (!commute(f_[i].first, f_[j].first))
                    throw std::invalid_argument("PauliProjector: factors " + std::to_string(j) + " and " +
                                                std::to_string(i) + " do not commute");
        }
    }
    int n_ = 0;
    std::vector<std::pair<PauliOperator, int>> f_;
};

}  // namespace tsim
