#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "gf2.hpp"
#include "pauli.hpp"
#include "phase_ring.hpp"

namespace tsim {

// q(u) = Σ_{i<j} 4 Q_ij u_i u_j + Σ D_i u_i + c  (mod 8), D_i even.
// Q is kept symmetric with a zero diagonal.
class PhaseForm {
public:
    PhaseForm() = default;
    explicit PhaseForm(int m) : m_(m), Q_(m, BitVector(m)), D_(m, 0) {}

    int vars() const { return m_; }
    bool cross(int i, int j) const { return Q_[i].get(j); }
    int J(int i, int j) const { return Q_[i].get(j) ? 4 : 0; }
    int D(int i) const { return D_[i]; }
    int c() const { return c_; }
    const BitVector& neighbours(int i) const { return Q_[i]; }

    void set_cross(int i, int j, bool b) {
        if (i == j) throw std::invalid_argument("PhaseForm: diagonal cross term");
        Q_[i].set(j, b);
        Q_[j].set(i, b);
    }
    void set_D(int i, int v) {
        v = mod8(v);
        if (v % 2) throw std::invalid_argument("PhaseForm: odd linear coefficient");
        D_[i] = v;
    }
    void set_c(int v) { c_ = mod8(v); }
    void add_c(int v) { c_ = mod8(c_ + v); }
    void add_D(int i, int v) { D_[i] = mod8(D_[i] + v); }

    int eval(const BitVector& u) const {
        int q = c_;
        int pairs = 0;
        u.for_each_set([&](int i) {
            q += D_[i];
            pairs += (Q_[i] & u).popcount();
        });
        q += 4 * ((pairs / 2) & 1);
        return mod8(q);
    }

    PhaseForm negated() const {
        PhaseForm r = *this;
        for (auto& d : r.D_) d = mod8(-d);
        r.c_ = mod8(-c_);
        return r;
    }
    PhaseForm operator+(const PhaseForm& o) const {
        if (o.m_ != m_) throw std::invalid_argument("PhaseForm: size mismatch");
        PhaseForm r = *this;
        for (int i = 0; i < m_; ++i) {
            r.Q_[i] ^= o.Q_[i];
            r.D_[i] = mod8(D_[i] + o.D_[i]);
        }
        r.c_ = mod8(c_ + o.c_);
        return r;
    }
    // block-diagonal sum on disjoint variables
    PhaseForm direct_sum(const PhaseForm& o) const {
        PhaseForm r(m_ + o.m_);
        for (int i = 0; i < m_; ++i) {
            r.Q_[i] = Q_[i].concat(BitVector(o.m_));
            r.D_[i] = D_[i];
        }
        for (int i = 0; i < o.m_; ++i) {
            r.Q_[m_ + i] = BitVector(m_).concat(o.Q_[i]);
            r.D_[m_ + i] = o.D_[i];
        }
        r.c_ = mod8(c_ + o.c_);
        return r;
    }

    // Form in new variables w with u_i = R_i·w + t_i (mod 2).
    PhaseForm reparam(const std::vector<BitVector>& R, const BitVector& t, int mnew) const {
        PhaseForm out(mnew);
        out.c_ = c_;
        for (int i = 0; i < m_; ++i) {
            const BitVector& r = R[i];
            bool tau = t.get(i);
            int Di = D_[i];
            if (Di) {
                if (tau) out.add_c(Di);
                r.for_each_set([&](int a) { out.add_D(a, Di); });
                if (Di % 4 == 2) {
                    if (tau) r.for_each_set([&](int a) { out.add_D(a, 4); });
                    out.toggle_pairs(r);
                }
            }
            if (Q_[i].is_zero()) continue;
            BitVector s(mnew);
            bool sigma = false;
            Q_[i].for_each_set([&](int j) {
                if (j > i) {
                    s ^= R[j];
                    sigma ^= t.get(j);
                }
            });
            // (r·w + tau)(s·w + sigma) mod 2
            r.for_each_set([&](int a) { out.Q_[a] ^= s; });
            s.for_each_set([&](int a) { out.Q_[a] ^= r; });
            (r & s).for_each_set([&](int a) { out.add_D(a, 4); });
            if (tau) s.for_each_set([&](int a) { out.add_D(a, 4); });
            if (sigma) r.for_each_set([&](int a) { out.add_D(a, 4); });
            if (tau && sigma) out.add_c(4);
        }
        return out;
    }

    // Adds coeff·(XOR of u over S, read as an integer mod 4); coeff is ±2.
    void add_xor_times2(const BitVector& S, int coeff) {
        S.for_each_set([&](int l) { add_D(l, coeff); });
        toggle_pairs(S);
    }

    // u_k := beta ^ S·u, with k not in S. Variable k is left unused.
    void substitute(int k, bool beta, const BitVector& S) {
        int Dk = D_[k];
        BitVector row = Q_[k];
        row.for_each_set([&](int j) { Q_[j].flip(k); });
        Q_[k] = BitVector(m_);
        D_[k] = 0;
        if (Dk) {
            if (beta) add_c(Dk);
            S.for_each_set([&](int l) { add_D(l, Dk); });
            if (Dk % 4 == 2) {
                if (beta) S.for_each_set([&](int l) { add_D(l, 4); });
                toggle_pairs(S);
            }
        }
        if (!row.is_zero()) {
            if (beta) row.for_each_set([&](int a) { add_D(a, 4); });
            S.for_each_set([&](int a) { Q_[a] ^= row; });
            row.for_each_set([&](int a) { Q_[a] ^= S; });
            (S & row).for_each_set([&](int a) { add_D(a, 4); });
        }
    }

    // Drops an unused variable.
    PhaseForm erase(int k) const {
        PhaseForm r(m_ - 1);
        for (int i = 0, o = 0; i < m_; ++i) {
            if (i == k) continue;
            r.Q_[o] = Q_[i].erase(k);
            r.D_[o] = D_[i];
            ++o;
        }
        r.c_ = c_;
        return r;
    }
    PhaseForm appended(int Dnew, const BitVector& coupling) const {
        PhaseForm r(m_ + 1);
        for (int i = 0; i < m_; ++i) {
            r.Q_[i] = Q_[i].resized(m_ + 1);
            if (coupling.get(i)) {
                r.Q_[i].set(m_);
                r.Q_[m_].set(i);
            }
            r.D_[i] = D_[i];
        }
        r.set_D(m_, Dnew);
        r.c_ = c_;
        return r;
    }

    struct Sum {
        bool zero = false;
        int p = 0;  // power of √2
        int k = 0;  // power of e^{iπ/4}
        ExactAmplitude value() const {
            return zero ? ExactAmplitude::zero() : ExactAmplitude::sqrt2_pow(p) * omega(k);
        }
    };

    // Σ_u e^{iπ/4 q(u)} by successive elimination of variables.
    Sum exponential_sum() const {
        PhaseForm f = *this;
        Sum s;
        std::vector<char> active(m_, 1);
        for (int i = m_ - 1; i >= 0; --i) {
            if (!active[i]) continue;
            BitVector l = f.Q_[i];
            int Di = f.D_[i];
            l.for_each_set([&](int j) { f.Q_[j].flip(i); });
            f.Q_[i] = BitVector(m_);
            f.D_[i] = 0;
            active[i] = 0;
            if (l.is_zero()) {
                if (Di == 0) s.p += 2;
                else if (Di == 4) return Sum{true, 0, 0};
                else {
                    s.p += 1;
                    s.k += Di == 2 ? 1 : -1;
                }
            } else if (Di % 4 == 0) {
                // 2·[l·u = Di/4]
                s.p += 2;
                int j = l.first_set();
                l.flip(j);
                f.substitute(j, Di == 4, l);
                active[j] = 0;
            } else {
                // 1 + i^{±1}(-1)^{l·u} = √2 e^{±iπ/4} i^{∓ l·u}
                s.p += 1;
                if (Di == 2) {
                    s.k += 1;
                    f.add_xor_times2(l, -2);
                } else {
                    s.k -= 1;
                    f.add_xor_times2(l, 2);
                }
            }
        }
        s.k = mod8(s.k + f.c_);
        return s;
    }

    friend bool operator==(const PhaseForm&, const PhaseForm&) = default;

private:
    static int mod8(int v) { return ((v % 8) + 8) % 8; }
    void toggle_pairs(const BitVector& S) {
        S.for_each_set([&](int a) {
            Q_[a] ^= S;
            Q_[a].flip(a);
        });
    }

    int m_ = 0;
    std::vector<BitVector> Q_;
    std::vector<int> D_;
    int c_ = 0;
};

// amplitude(G u + h) = global · e^{iπ/4 q(u)}
class StabilizerState {
public:
    StabilizerState() = default;
    StabilizerState(AffineSpace space, PhaseForm form, ExactAmplitude global)
        : space_(std::move(space)), form_(std::move(form)), global_(global) {
        if (form_.vars() != space_.dim()) throw std::invalid_argument("StabilizerState: form/space size mismatch");
    }
    // J given as an upper-triangular m x m list (entries 0 or 4 mod 8)
    StabilizerState(AffineSpace space, const std::vector<std::vector<int>>& J, const std::vector<int>& D, int c,
                    ExactAmplitude global)
        : space_(std::move(space)), form_(space_.dim()), global_(global) {
        int m = space_.dim();
        if ((int)D.size() != m) throw std::invalid_argument("StabilizerState: D length");
        for (int i = 0; i < m; ++i) form_.set_D(i, D[i]);
        if (!J.empty()) {
            if ((int)J.size() != m) throw std::invalid_argument("StabilizerState: J size");
            for (int i = 0; i < m; ++i)
                for (int j = i + 1; j < m; ++j) {
                    int v = ((J[i][j] % 8) + 8) % 8;
                    if (v != 0 && v != 4) throw std::invalid_argument("StabilizerState: J entries must be 0 or 4 mod 8");
                    form_.set_cross(i, j, v == 4);
                }
        }
        form_.set_c(c);
    }

    static StabilizerState basis_state(const BitVector& x) {
        return StabilizerState(AffineSpace::point(x), PhaseForm(0), ExactAmplitude::one());
    }
    static StabilizerState zeros(int n) { return basis_state(BitVector(n)); }
    static StabilizerState plus(int n) {
        return StabilizerState(AffineSpace::full(n), PhaseForm(n), ExactAmplitude::inv_sqrt2_pow(n));
    }

    int n() const { return space_.ambient(); }
    int m() const { return space_.dim(); }
    const AffineSpace& space() const { return space_; }
    const PhaseForm& form() const { return form_; }
    const ExactAmplitude& global() const { return global_; }
    int J(int i, int j) const { return form_.J(i, j); }
    int D(int i) const { return form_.D(i); }
    int c() const { return form_.c(); }

    StabilizerState scaled(const ExactAmplitude& f) const { return StabilizerState(space_, form_, global_ * f); }

    ExactAmplitude amplitude(const BitVector& x) const {
        auto u = space_.membership(x);
        if (!u) return ExactAmplitude::zero();
        return global_ * omega(form_.eval(*u));
    }
    // <s|s>
    ExactAmplitude norm_sq() const { return global_.norm_sq() * ExactAmplitude::sqrt2_pow(2 * m()); }

    // Same vector with canonical basis and c folded into the global factor.
    StabilizerState canonical() const {
        auto C = space_.canonical_with_transform();
        PhaseForm f = form_.reparam(C.T, C.t, m());
        ExactAmplitude g = global_ * omega(f.c());
        f.set_c(0);
        return StabilizerState(C.space, f, g);
    }

    friend bool operator==(const StabilizerState&, const StabilizerState&) = default;

private:
    AffineSpace space_;
    PhaseForm form_;
    ExactAmplitude global_;
};

inline bool same_vector(const StabilizerState& a, const StabilizerState& b) {
    if (a.global().is_zero() && b.global().is_zero()) return true;
    return a.canonical() == b.canonical();
}

// Σ_u e^{iπ/4 q(u)} · global
inline ExactAmplitude exponential_sum(const StabilizerState& s) { return s.form().exponential_sum().value() * s.global(); }

struct ShrinkResult {
    enum Kind { Empty, Unchanged, Shrunk } kind;
    StabilizerState state;
    bool empty() const { return kind == Empty; }
};

namespace detail {

// restrict to L·u = beta in coordinates u
inline ShrinkResult shrink_u(const StabilizerState& s, BitVector L, bool beta) {
    if (L.is_zero()) return {beta ? ShrinkResult::Empty : ShrinkResult::Unchanged, s};
    int k = L.first_set();
    L.flip(k);
    PhaseForm f = s.form();
    f.substitute(k, beta, L);
    std::vector<BitVector> basis = s.space().basis();
    BitVector h = s.space().shift();
    L.for_each_set([&](int j) { basis[j] ^= basis[k]; });
    if (beta) h ^= basis[k];
    basis.erase(basis.begin() + k);
    return {ShrinkResult::Shrunk, StabilizerState(AffineSpace(s.n(), basis, h), f.erase(k), s.global())};
}

}  // namespace detail

inline ShrinkResult shrink(const StabilizerState& s, const BitVector& xi, bool bit) {
    if (xi.size() != s.n()) throw std::invalid_argument("shrink: length mismatch");
    BitVector L(s.m());
    for (int j = 0; j < s.m(); ++j)
        if (xi.dot(s.space().basis()[j])) L.set(j);
    bool beta = bit ^ xi.dot(s.space().shift());
    return detail::shrink_u(s, L, beta);
}

// Adds a basis direction; the new coordinate enters with linear coefficient Dnew and
// cross terms 4·coupling_j. The global factor is left unchanged.
inline StabilizerState extend(const StabilizerState& s, const BitVector& direction, int Dnew = 0,
                              std::optional<BitVector> coupling = std::nullopt) {
    if (direction.size() != s.n()) throw std::invalid_argument("extend: length mismatch");
    if (SpanSolver(s.space().basis(), s.n()).solve(direction))
        throw std::invalid_argument("extend: direction already in the span of the basis");
    std::vector<BitVector> basis = s.space().basis();
    basis.push_back(direction);
    BitVector cp = coupling ? *coupling : BitVector(s.m());
    return StabilizerState(AffineSpace(s.n(), basis, s.space().shift()), s.form().appended(Dnew, cp), s.global());
}

inline StabilizerState tensor(const StabilizerState& a, const StabilizerState& b) {
    int n = a.n() + b.n();
    std::vector<BitVector> basis;
    for (auto& g : a.space().basis()) basis.push_back(g.concat(BitVector(b.n())));
    for (auto& g : b.space().basis()) basis.push_back(BitVector(a.n()).concat(g));
    return StabilizerState(AffineSpace(n, basis, a.space().shift().concat(b.space().shift())),
                           a.form().direct_sum(b.form()), a.global() * b.global());
}

// <a|b>
inline ExactAmplitude inner_product(const StabilizerState& a, const StabilizerState& b) {
    if (a.n() != b.n()) throw std::invalid_argument("inner_product: qubit count mismatch");
    if (a.global().is_zero() || b.global().is_zero()) return ExactAmplitude::zero();
    // restrict a to the support of b
    StabilizerState r = a;
    BitMatrix dual = dual_basis(b.space());
    for (int k = 0; k < dual.rows(); ++k) {
        auto res = shrink(r, dual.row(k), dual.row(k).dot(b.space().shift()));
        if (res.empty()) return ExactAmplitude::zero();
        r = std::move(res.state);
    }
    // b's coordinates as an affine function of r's
    SpanSolver S(b.space().basis(), b.n());
    int mr = r.m(), mb = b.m();
    std::vector<BitVector> R(mb, BitVector(mr));
    for (int w = 0; w < mr; ++w) {
        auto y = S.solve(r.space().basis()[w]);
        y->for_each_set([&](int i) { R[i].set(w); });
    }
    BitVector t = *S.solve(r.space().shift() ^ b.space().shift());
    PhaseForm f = r.form().negated() + b.form().reparam(R, t, mr);
    return r.global().conj() * b.global() * f.exponential_sum().value();
}

struct MeasureResult {
    std::optional<StabilizerState> state;  // empty when annihilated
    ExactAmplitude norm;                   // <s|(I + sign P)/2|s>
};

// ((I + sign·P)/2)|s>
inline MeasureResult measure_pauli(const StabilizerState& s, const PauliOperator& P, int sign) {
    if (P.size() != s.n()) throw std::invalid_argument("measure_pauli: size mismatch");
    const int base = P.base_phase() + (sign < 0 ? 4 : 0);
    const BitVector f = P.x_mask(), z = P.z_mask();
    const auto& G = s.space().basis();
    const BitVector& h = s.space().shift();
    const int m = s.m();
    ExactAmplitude norm = s.norm_sq();
    ExactAmplitude half = ExactAmplitude::inv_sqrt2_pow(2);

    auto phi = SpanSolver(G, s.n()).solve(f);
    if (!phi) {
        // support doubles: new coordinate w, branch w=1 carries sign·P applied to branch 0
        int Dw = base + (z.dot(h) ? 4 : 0);
        BitVector coupling(m);
        for (int j = 0; j < m; ++j)
            if (z.dot(G[j])) coupling.set(j);
        StabilizerState e = extend(s, f, Dw % 8, coupling).scaled(half);
        return {e, norm * half};
    }
    // P preserves the support: ratio sign·(P s)(x)/s(x) = e^{iπ/4 ρ(u)}, ρ affine with steps in {0,4}
    const PhaseForm& q = s.form();
    auto rho = [&](const BitVector& u) {
        BitVector x = s.space().point_at(u);
        return (base + (z.dot(x ^ f) ? 4 : 0) + q.eval(u ^ *phi) - q.eval(u) + 64) % 8;
    };
    BitVector zero(m);
    int r0 = rho(zero);
    BitVector L(m);
    for (int j = 0; j < m; ++j) {
        int dj = (rho(BitVector::unit(m, j)) - r0 + 8) % 8;
        if (dj == 4) L.set(j);
        else if (dj != 0) throw std::logic_error("measure_pauli: non-affine ratio");
    }
    if (L.is_zero()) {
        if (r0 == 0) return {s, norm};
        if (r0 == 4) return {std::nullopt, ExactAmplitude::zero()};
        // (1 + i^{±1})/2
        return {s.scaled((ExactAmplitude::one() + omega(r0)) * half), norm * half};
    }
    if (r0 % 4 == 0) {
        auto res = detail::shrink_u(s, L, r0 == 4);
        return {res.state, norm * half};
    }
    // (1 + i^{±1}(-1)^{L·u})/2 = e^{±iπ/4} i^{∓L·u}/√2
    PhaseForm nf = q;
    nf.add_xor_times2(L, r0 == 2 ? -2 : 2);
    ExactAmplitude g = s.global() * omega(r0 == 2 ? 1 : -1) * ExactAmplitude::inv_sqrt2_pow(1);
    return {StabilizerState(s.space(), nf, g), norm * half};
}

// log2 of the number of stabilizer states with support dimension m, up to global phase
inline double log2_states_with_dim(int n, int m) {
    // 2^{n-m} · [n choose m]_2 · 4^m · 2^{m(m-1)/2}
    double lg = (n - m) + 2.0 * m + m * (m - 1) / 2.0;
    for (int i = 0; i < m; ++i) lg += std::log2(std::pow(2.0, n - i) - 1) - std::log2(std::pow(2.0, m - i) - 1);
    return lg;
}

template <class Rng>
double uniform01(Rng& rng) {
    return double(rng() >> 11) * (1.0 / 9007199254740992.0);
}

template <class Rng>
StabilizerState random_stabilizer_state(int n, Rng& rng) {
    if (n < 1) throw std::invalid_argument("random_stabilizer_state: n must be >= 1");
    std::vector<double> lw(n + 1);
    double mx = -1e300;
    for (int m = 0; m <= n; ++m) mx = std::max(mx, lw[m] = log2_states_with_dim(n, m));
    double tot = 0;
    for (auto& v : lw) tot += (v = std::exp2(v - mx));
    double r = uniform01(rng) * tot;
    int m = n;
    for (int k = 0; k <= n; ++k) {
        if (r < lw[k]) {
            m = k;
            break;
        }
        r -= lw[k];
    }
    auto rand_vec = [&](int len) {
        BitVector v(len);
        for (int i = 0; i < len; ++i)
            if (rng() & 1) v.set(i);
        return v;
    };
    std::vector<BitVector> basis;
    while (true) {
        basis.clear();
        for (int j = 0; j < m; ++j) basis.push_back(rand_vec(n));
        if (SpanSolver(basis, n).independent()) break;
    }
    AffineSpace A = AffineSpace(n, basis, rand_vec(n)).canonical();
    PhaseForm f(m);
    for (int i = 0; i < m; ++i) {
        f.set_D(i, 2 * int(rng() % 4));
        for (int j = i + 1; j < m; ++j) f.set_cross(i, j, rng() & 1);
    }
    f.set_c(int(rng() % 8));
    return StabilizerState(A, f, ExactAmplitude::inv_sqrt2_pow(m));
}

inline void check_dense_size(int n) {
    if (n > 14) throw std::invalid_argument("dense conversion limited to 14 qubits");
}

inline std::vector<ExactAmplitude> to_dense_exact(const StabilizerState& s) {
    check_dense_size(s.n());
    std::vector<ExactAmplitude> v(size_t(1) << s.n());
    int m = s.m();
    for (uint64_t k = 0; k < (uint64_t(1) << m); ++k) {
        BitVector u(m);
        for (int j = 0; j < m; ++j)
            if ((k >> j) & 1) u.set(j);
        v[s.space().point_at(u).to_index()] = s.global() * omega(s.form().eval(u));
    }
    return v;
}

inline std::vector<std::complex<double>> to_dense(const StabilizerState& s) {
    auto ex = to_dense_exact(s);
    std::vector<std::complex<double>> v(ex.size());
    for (size_t i = 0; i < ex.size(); ++i) v[i] = ex[i].to_complex();
    return v;
}

}  // namespace tsim
