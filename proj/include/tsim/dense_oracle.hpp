#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "pauli.hpp"
#include "phase_ring.hpp"

namespace tsim {

using cplx = std::complex<double>;

// Plain state vector; qubit 0 is the most significant bit of the index.
struct DenseState {
    int n = 0;
    std::vector<cplx> amp;

    double norm_sq() const {
        double s = 0;
        for (auto& a : amp) s += std::norm(a);
        return s;
    }
};

struct ExactDenseState {
    int n = 0;
    std::vector<ExactAmplitude> amp;
};

inline void dense_guard(int n) {
    if (n < 0 || n > 14) throw std::invalid_argument("dense oracle limited to 0..14 qubits");
}

template <class V>
V kron(const V& a, const V& b) {
    V r(a.size() * b.size());
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i * b.size() + j] = a[i] * b[j];
    return r;
}

inline DenseState dense_magic_state(int t) {
    dense_guard(t);
    const double s = 1 / std::sqrt(2.0);
    std::vector<cplx> one{s, cplx(0.5, 0.5)};
    std::vector<cplx> v{1.0};
    for (int k = 0; k < t; ++k) v = kron(v, one);
    return {t, v};
}

inline ExactDenseState dense_magic_state_exact(int t) {
    dense_guard(t);
    std::vector<ExactAmplitude> one{ExactAmplitude::inv_sqrt2_pow(1), omega(1) * ExactAmplitude::inv_sqrt2_pow(1)};
    std::vector<ExactAmplitude> v{ExactAmplitude::one()};
    for (int k = 0; k < t; ++k) v = kron(v, one);
    return {t, v};
}

// |s> ⊗ |0...0>
inline DenseState with_zeros(const DenseState& s, int extra) {
    dense_guard(s.n + extra);
    std::vector<cplx> z(size_t(1) << extra, 0.0);
    z[0] = 1.0;
    return {s.n + extra, kron(s.amp, z)};
}

// Same action as pauli_on_basis, on integer indices.
struct IndexedPauli {
    uint64_t xm, zm;
    int base;
    explicit IndexedPauli(const PauliOperator& P)
        : xm(P.x_mask().to_index()), zm(P.z_mask().to_index()), base(P.base_phase()) {}
    int phase(uint64_t x) const { return (base + (std::popcount(x & zm) & 1) * 4) % 8; }
};

inline std::vector<cplx> apply_pauli(const std::vector<cplx>& v, int n, const PauliOperator& P) {
    if (P.size() != n) throw std::invalid_argument("apply_pauli: size mismatch");
    IndexedPauli ip(P);
    static const cplx roots[8] = {{1, 0}, {M_SQRT1_2, M_SQRT1_2}, {0, 1}, {-M_SQRT1_2, M_SQRT1_2},
                                  {-1, 0}, {-M_SQRT1_2, -M_SQRT1_2}, {0, -1}, {M_SQRT1_2, -M_SQRT1_2}};
    std::vector<cplx> out(v.size(), 0.0);
    for (uint64_t x = 0; x < v.size(); ++x) out[x ^ ip.xm] += roots[ip.phase(x)] * v[x];
    return out;
}

inline std::vector<ExactAmplitude> apply_pauli(const std::vector<ExactAmplitude>& v, int n, const PauliOperator& P) {
    if (P.size() != n) throw std::invalid_argument("apply_pauli: size mismatch");
    IndexedPauli ip(P);
    std::vector<ExactAmplitude> out(v.size());
    for (uint64_t x = 0; x < v.size(); ++x)
        if (!v[x].is_zero()) out[x ^ ip.xm] += omega(ip.phase(x)) * v[x];
    return out;
}

inline cplx dense_pauli_expect(const DenseState& s, const PauliOperator& P) {
    if (P.size() != s.n) throw std::invalid_argument("dense_pauli_expect: size mismatch");
    auto w = apply_pauli(s.amp, s.n, P);
    cplx acc = 0;
    for (size_t i = 0; i < w.size(); ++i) acc += std::conj(s.amp[i]) * w[i];
    return acc;
}

inline ExactAmplitude dense_pauli_expect(const ExactDenseState& s, const PauliOperator& P) {
    if (P.size() != s.n) throw std::invalid_argument("dense_pauli_expect: size mismatch");
    auto w = apply_pauli(s.amp, s.n, P);
    ExactAmplitude acc;
    for (size_t i = 0; i < w.size(); ++i) acc += s.amp[i].conj() * w[i];
    return acc;
}

inline double dense_projector_expect(const DenseState& s, const PauliProjector& proj) {
    if (proj.qubits() != s.n) throw std::invalid_argument("dense_projector_expect: size mismatch");
    std::vector<cplx> v = s.amp;
    for (auto& [P, sign] : proj.factors()) {
        auto w = apply_pauli(v, s.n, P);
        for (size_t i = 0; i < v.size(); ++i) v[i] = 0.5 * (v[i] + double(sign) * w[i]);
    }
    cplx acc = 0;
    for (size_t i = 0; i < v.size(); ++i) acc += std::conj(s.amp[i]) * v[i];
    return acc.real();
}

inline ExactAmplitude dense_projector_expect(const ExactDenseState& s, const PauliProjector& proj) {
    if (proj.qubits() != s.n) throw std::invalid_argument("dense_projector_expect: size mismatch");
    std::vector<ExactAmplitude> v = s.amp;
    const ExactAmplitude half = ExactAmplitude::inv_sqrt2_pow(2);
    for (auto& [P, sign] : proj.factors()) {
        auto w = apply_pauli(v, s.n, P);
        for (size_t i = 0; i < v.size(); ++i) v[i] = half * (sign > 0 ? v[i] + w[i] : v[i] - w[i]);
    }
    ExactAmplitude acc;
    for (size_t i = 0; i < v.size(); ++i) acc += s.amp[i].conj() * v[i];
    return acc;
}

}  // namespace tsim
