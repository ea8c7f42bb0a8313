#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tsim {

class BitVector {
public:
    BitVector() = default;
    explicit BitVector(int n) : n_(n), w_((n + 63) / 64, 0) {
        if (n < 0) throw std::invalid_argument("BitVector: negative length");
    }
    // '0'/'1' characters, index 0 first
    static BitVector from_string(const std::string& s) {
        BitVector v((int)s.size());
        for (size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '1') v.set((int)i);
            else if (s[i] != '0') throw std::invalid_argument("BitVector: bad character at position " + std::to_string(i));
        }
        return v;
    }
    static BitVector unit(int n, int i) {
        BitVector v(n);
        v.set(i);
        return v;
    }

    int size() const { return n_; }
    bool get(int i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
    void set(int i, bool b = true) {
        uint64_t m = uint64_t(1) << (i & 63);
        if (b) w_[i >> 6] |= m;
        else w_[i >> 6] &= ~m;
    }
    void flip(int i) { w_[i >> 6] ^= uint64_t(1) << (i & 63); }

    BitVector& operator^=(const BitVector& o) {
        for (size_t k = 0; k < w_.size(); ++k) w_[k] ^= o.w_[k];
        return *this;
    }
    friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
    BitVector& operator&=(const BitVector& o) {
        for (size_t k = 0; k < w_.size(); ++k) w_[k] &= o.w_[k];
        return *this;
    }
    friend BitVector operator&(BitVector a, const BitVector& b) { return a &= b; }

    bool dot(const BitVector& o) const {
        uint64_t acc = 0;
        for (size_t k = 0; k < w_.size(); ++k) acc ^= w_[k] & o.w_[k];
        return std::popcount(acc) & 1;
    }
    int popcount() const {
        int c = 0;
        for (auto w : w_) c += std::popcount(w);
        return c;
    }
    bool is_zero() const {
        for (auto w : w_)
            if (w) return false;
        return true;
    }
    // lowest set index or -1
    int first_set() const {
        for (size_t k = 0; k < w_.size(); ++k)
            if (w_[k]) return int(k * 64 + std::countr_zero(w_[k]));
        return -1;
    }
    template <class F>
    void for_each_set(F&& f) const {
        for (size_t k = 0; k < w_.size(); ++k) {
            uint64_t w = w_[k];
            while (w) {
                f(int(k * 64 + std::countr_zero(w)));
                w &= w - 1;
            }
        }
    }
    BitVector resized(int n) const {
        BitVector r(n);
        for (int i = 0; i < std::min(n, n_); ++i)
            if (get(i)) r.set(i);
        return r;
    }
    // this followed by o
    BitVector concat(const BitVector& o) const {
        BitVector r(n_ + o.n_);
        for_each_set([&](int i) { r.set(i); });
        o.for_each_set([&](int i) { r.set(n_ + i); });
        return r;
    }
    BitVector erase(int idx) const {
        BitVector r(n_ - 1);
        for_each_set([&](int i) {
            if (i < idx) r.set(i);
            else if (i > idx) r.set(i - 1);
        });
        return r;
    }
    // low bits as an integer, index 0 as the most significant of the n bits
    uint64_t to_index() const {
        uint64_t x = 0;
        for (int i = 0; i < n_; ++i) x = (x << 1) | (get(i) ? 1u : 0u);
        return x;
    }
    static BitVector from_index(int n, uint64_t x) {
        BitVector v(n);
        for (int i = 0; i < n; ++i)
            if ((x >> (n - 1 - i)) & 1) v.set(i);
        return v;
    }
    std::string to_string() const {
        std::string s(n_, '0');
        for (int i = 0; i < n_; ++i)
            if (get(i)) s[i] = '1';
        return s;
    }
    const std::vector<uint64_t>& words() const { return w_; }

    friend bool operator==(const BitVector&, const BitVector&) = default;
    friend auto operator<=>(const BitVector&, const BitVector&) = default;

private:
    int n_ = 0;
    std::vector<uint64_t> w_;
};

class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(int r, int c) : c_(c), rows_(r, BitVector(c)) {}
    static BitMatrix identity(int n) {
        BitMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.set(i, i);
        return m;
    }
    static BitMatrix from_rows(const std::vector<BitVector>& rows, int cols) {
        BitMatrix m;
        m.c_ = cols;
        m.rows_ = rows;
        for (auto& r : m.rows_)
            if (r.size() != cols) throw std::invalid_argument("BitMatrix: ragged rows");
        return m;
    }
    static BitMatrix from_strings(const std::vector<std::string>& rows) {
        std::vector<BitVector> r;
        for (auto& s : rows) r.push_back(BitVector::from_string(s));
        return from_rows(r, rows.empty() ? 0 : (int)rows[0].size());
    }

    int rows() const { return (int)rows_.size(); }
    int cols() const { return c_; }
    bool get(int i, int j) const { return rows_[i].get(j); }
    void set(int i, int j, bool b = true) { rows_[i].set(j, b); }
    const BitVector& row(int i) const { return rows_[i]; }
    BitVector& row(int i) { return rows_[i]; }
    const std::vector<BitVector>& row_list() const { return rows_; }

    BitVector column(int j) const {
        BitVector v(rows());
        for (int i = 0; i < rows(); ++i)
            if (get(i, j)) v.set(i);
        return v;
    }
    BitMatrix transpose() const {
        BitMatrix t(c_, rows());
        for (int i = 0; i < rows(); ++i) rows_[i].for_each_set([&](int j) { t.set(j, i); });
        return t;
    }
    BitVector operator*(const BitVector& v) const {
        BitVector r(rows());
        for (int i = 0; i < rows(); ++i)
            if (rows_[i].dot(v)) r.set(i);
        return r;
    }
    BitMatrix operator*(const BitMatrix& o) const {
        BitMatrix r(rows(), o.cols());
        for (int i = 0; i < rows(); ++i) rows_[i].for_each_set([&](int k) { r.rows_[i] ^= o.rows_[k]; });
        return r;
    }
    friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

private:
    int c_ = 0;
    std::vector<BitVector> rows_;
};

struct Elimination {
    int rank = 0;
    BitMatrix row_ops;            // row_ops * M = echelon
    BitMatrix echelon;            // reduced row echelon form
    std::vector<int> col_pivots;  // pivot column of echelon row i, i < rank
};

inline Elimination gauss_eliminate(const BitMatrix& M) {
    Elimination E;
    E.echelon = M;
    E.row_ops = BitMatrix::identity(M.rows());
    int r = 0;
    for (int col = 0; col < M.cols() && r < M.rows(); ++col) {
        int p = -1;
        for (int i = r; i < M.rows(); ++i)
            if (E.echelon.get(i, col)) {
                p = i;
                break;
            }
        if (p < 0) continue;
        std::swap(E.echelon.row(p), E.echelon.row(r));
        std::swap(E.row_ops.row(p), E.row_ops.row(r));
        for (int i = 0; i < M.rows(); ++i) {
            if (i != r && E.echelon.get(i, col)) {
                E.echelon.row(i) ^= E.echelon.row(r);
                E.row_ops.row(i) ^= E.row_ops.row(r);
            }
        }
        E.col_pivots.push_back(col);
        ++r;
    }
    E.rank = r;
    return E;
}

inline int rank(const BitMatrix& M) { return gauss_eliminate(M).rank; }

// Incremental reducer over a set of vectors: tracks which inputs combine into each echelon row.
class SpanSolver {
public:
    SpanSolver(const std::vector<BitVector>& vecs, int n) : n_(n), m_((int)vecs.size()) {
        for (int j = 0; j < m_; ++j) {
            BitVector v = vecs[j];
            BitVector comb(m_);
            comb.set(j);
            for (size_t r = 0; r < rows_.size(); ++r)
                if (v.get(piv_[r])) {
                    v ^= rows_[r];
                    comb ^= combs_[r];
                }
            int p = v.first_set();
            if (p < 0) {
                dependent_ = true;
                continue;
            }
            for (size_t r = 0; r < rows_.size(); ++r)
                if (rows_[r].get(p)) {
                    rows_[r] ^= v;
                    combs_[r] ^= comb;
                }
            rows_.push_back(v);
            combs_.push_back(comb);
            piv_.push_back(p);
        }
    }
    bool independent() const { return !dependent_; }
    int rank() const { return (int)rows_.size(); }
    // u with Σ u_j vecs_j = y
    std::optional<BitVector> solve(BitVector y) const {
        BitVector u(m_);
        for (size_t r = 0; r < rows_.size(); ++r)
            if (y.get(piv_[r])) {
                y ^= rows_[r];
                u ^= combs_[r];
            }
        if (!y.is_zero()) return std::nullopt;
        return u;
    }
    BitVector reduce(BitVector y) const {
        for (size_t r = 0; r < rows_.size(); ++r)
            if (y.get(piv_[r])) y ^= rows_[r];
        return y;
    }
    const std::vector<BitVector>& echelon() const { return rows_; }
    const std::vector<BitVector>& combinations() const { return combs_; }
    const std::vector<int>& pivots() const { return piv_; }

private:
    int n_, m_;
    bool dependent_ = false;
    std::vector<BitVector> rows_, combs_;
    std::vector<int> piv_;
};

// {Σ u_j g_j + h}
class AffineSpace {
public:
    AffineSpace() = default;
    AffineSpace(int n, std::vector<BitVector> basis, BitVector shift)
        : n_(n), basis_(std::move(basis)), h_(std::move(shift)) {
        if (h_.size() != n_) throw std::invalid_argument("AffineSpace: shift length");
        for (auto& g : basis_)
            if (g.size() != n_) throw std::invalid_argument("AffineSpace: basis vector length");
        if (!SpanSolver(basis_, n_).independent()) throw std::invalid_argument("AffineSpace: dependent basis");
    }
    static AffineSpace point(const BitVector& x) { return AffineSpace(x.size(), {}, x); }
    static AffineSpace full(int n) {
        std::vector<BitVector> b;
        for (int i = 0; i < n; ++i) b.push_back(BitVector::unit(n, i));
        return AffineSpace(n, b, BitVector(n));
    }

    int ambient() const { return n_; }
    int dim() const { return (int)basis_.size(); }
    const std::vector<BitVector>& basis() const { return basis_; }
    const BitVector& shift() const { return h_; }
    // n x m matrix with the basis as columns
    BitMatrix G() const { return BitMatrix::from_rows(basis_, n_).transpose(); }

    BitVector point_at(const BitVector& u) const {
        BitVector x = h_;
        u.for_each_set([&](int j) { x ^= basis_[j]; });
        return x;
    }
    std::optional<BitVector> membership(const BitVector& x) const {
        if (x.size() != n_) throw std::invalid_argument("affine_membership: length mismatch");
        return SpanSolver(basis_, n_).solve(x ^ h_);
    }
    bool contains(const BitVector& x) const { return membership(x).has_value(); }

    // Canonical basis in reduced echelon form (pivots ascending), shift zero on pivots.
    // Also returns (T, t) with old coordinates u = T w + t for new coordinates w.
    struct Canon;
    Canon canonical_with_transform() const;
    AffineSpace canonical() const;

    friend bool operator==(const AffineSpace& a, const AffineSpace& b);

private:
    int n_ = 0;
    std::vector<BitVector> basis_;
    BitVector h_;
};

struct AffineSpace::Canon {
    AffineSpace space;
    std::vector<BitVector> T;  // m rows, each length m: u_i = T_i . w + t_i
    BitVector t;
};

inline AffineSpace::Canon AffineSpace::canonical_with_transform() const {
    int m = dim();
    SpanSolver S(basis_, n_);
    // order echelon rows by pivot
    std::vector<int> order(m);
    for (int r = 0; r < m; ++r) order[r] = r;
    std::sort(order.begin(), order.end(), [&](int x, int y) { return S.pivots()[x] < S.pivots()[y]; });
    std::vector<BitVector> nb;
    std::vector<BitVector> cols;  // column w of T = combination for new basis vector w
    for (int r : order) {
        nb.push_back(S.echelon()[r]);
        cols.push_back(S.combinations()[r]);
    }
    BitVector h = h_;
    BitVector t(m);
    for (int r = 0; r < m; ++r)
        if (h.get(S.pivots()[r])) {
            h ^= S.echelon()[r];
            t ^= S.combinations()[r];
        }
    Canon c;
    c.space.n_ = n_;
    c.space.basis_ = nb;
    c.space.h_ = h;
    c.T.assign(m, BitVector(m));
    for (int w = 0; w < m; ++w) cols[w].for_each_set([&](int i) { c.T[i].set(w); });
    c.t = t;
    return c;
}

inline AffineSpace AffineSpace::canonical() const { return canonical_with_transform().space; }

inline bool operator==(const AffineSpace& a, const AffineSpace& b) {
    if (a.n_ != b.n_ || a.dim() != b.dim()) return false;
    AffineSpace ca = a.canonical(), cb = b.canonical();
    return ca.basis_ == cb.basis_ && ca.h_ == cb.h_;
}

inline std::optional<BitVector> affine_membership(const AffineSpace& A, const BitVector& x) { return A.membership(x); }

// Rows ξ spanning the annihilator of the linear part: ξ·(x - h) = 0 on A.
inline BitMatrix dual_basis(const AffineSpace& A) {
    int n = A.ambient();
    SpanSolver S(A.basis(), n);
    std::vector<bool> is_piv(n, false);
    for (int p : S.pivots()) is_piv[p] = true;
    std::vector<BitVector> out;
    for (int f = 0; f < n; ++f) {
        if (is_piv[f]) continue;
        BitVector xi(n);
        xi.set(f);
        for (size_t r = 0; r < S.echelon().size(); ++r)
            if (S.echelon()[r].get(f)) xi.set(S.pivots()[r]);
        out.push_back(xi);
    }
    return BitMatrix::from_rows(out, n);
}

inline std::optional<AffineSpace> affine_intersection(const AffineSpace& A, const AffineSpace& B) {
    if (A.ambient() != B.ambient()) throw std::invalid_argument("affine_intersection: ambient mismatch");
    int n = A.ambient(), m = A.dim();
    BitMatrix dual = dual_basis(B);
    // constraints on u: (ξ·g_j)_j · u = ξ·(h_A + h_B)
    std::vector<BitVector> rows;
    std::vector<bool> rhs;
    for (int r = 0; r < dual.rows(); ++r) {
        BitVector c(m);
        for (int j = 0; j < m; ++j)
            if (dual.row(r).dot(A.basis()[j])) c.set(j);
        rows.push_back(c);
        rhs.push_back(dual.row(r).dot(A.shift() ^ B.shift()));
    }
    // augmented elimination
    std::vector<BitVector> aug;
    for (size_t r = 0; r < rows.size(); ++r) {
        BitVector v = rows[r].resized(m + 1);
        if (rhs[r]) v.set(m);
        aug.push_back(v);
    }
    Elimination E = gauss_eliminate(BitMatrix::from_rows(aug, m + 1));
    for (int r = 0; r < E.rank; ++r)
        if (E.col_pivots[r] == m) return std::nullopt;
    std::vector<bool> is_piv(m, false);
    for (int r = 0; r < E.rank; ++r) is_piv[E.col_pivots[r]] = true;
    BitVector u0(m);
    for (int r = 0; r < E.rank; ++r)
        if (E.echelon.get(r, m)) u0.set(E.col_pivots[r]);
    std::vector<BitVector> basis;
    for (int f = 0; f < m; ++f) {
        if (is_piv[f]) continue;
        BitVector k(m);
        k.set(f);
        for (int r = 0; r < E.rank; ++r)
            if (E.echelon.get(r, f)) k.set(E.col_pivots[r]);
        BitVector g(n);
        k.for_each_set([&](int j) { g ^= A.basis()[j]; });
        basis.push_back(g);
    }
    return AffineSpace(n, basis, A.point_at(u0)).canonical();
}

}  // namespace tsim
