#pragma once

#include <complex>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <cmath>

namespace tsim {

using i128 = __int128;

inline std::string i128_to_string(i128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    unsigned __int128 u = neg ? (unsigned __int128)(-(v + 1)) + 1 : (unsigned __int128)v;
    std::string s;
    while (u) {
        s.insert(s.begin(), char('0' + int(u % 10)));
        u /= 10;
    }
    return neg ? "-" + s : s;
}

namespace detail {
inline i128 add(i128 x, i128 y) {
    i128 r;
    if (__builtin_add_overflow(x, y, &r)) throw std::overflow_error("ExactAmplitude: add overflow");
    return r;
}
inline i128 sub(i128 x, i128 y) {
    i128 r;
    if (__builtin_sub_overflow(x, y, &r)) throw std::overflow_error("ExactAmplitude: sub overflow");
    return r;
}
inline i128 mul(i128 x, i128 y) {
    i128 r;
    if (__builtin_mul_overflow(x, y, &r)) throw std::overflow_error("ExactAmplitude: mul overflow");
    return r;
}
}  // namespace detail

// (a + b√2 + (c + d√2)i) / √2^e, kept with e minimal.
class ExactAmplitude {
public:
    constexpr ExactAmplitude() = default;
    ExactAmplitude(i128 a, i128 b, i128 c, i128 d, int e) : a_(a), b_(b), c_(c), d_(d), e_(e) {
        if (e < 0) throw std::invalid_argument("ExactAmplitude: negative exponent");
        canonicalize();
    }
    static ExactAmplitude integer(i128 v) { return {v, 0, 0, 0, 0}; }
    static ExactAmplitude zero() { return {}; }
    static ExactAmplitude one() { return integer(1); }
    static ExactAmplitude imag_unit() { return {0, 0, 1, 0, 0}; }
    static ExactAmplitude sqrt2() { return {0, 1, 0, 0, 0}; }
    // 1/√2^p
    static ExactAmplitude inv_sqrt2_pow(int p) { return {1, 0, 0, 0, p}; }
    // √2^p for p >= 0
    static ExactAmplitude sqrt2_pow(int p) {
        ExactAmplitude r = one();
        for (int k = 0; k < p / 2; ++k) r = r * integer(2);
        if (p % 2) r = r * sqrt2();
        return r;
    }

    i128 a() const { return a_; }
    i128 b() const { return b_; }
    i128 c() const { return c_; }
    i128 d() const { return d_; }
    int e() const { return e_; }

    bool is_zero() const { return a_ == 0 && b_ == 0 && c_ == 0 && d_ == 0; }
    bool is_real() const { return c_ == 0 && d_ == 0; }

    friend bool operator==(const ExactAmplitude&, const ExactAmplitude&) = default;
    friend auto operator<=>(const ExactAmplitude&, const ExactAmplitude&) = default;

    ExactAmplitude operator-() const { return {-a_, -b_, -c_, -d_, e_}; }
    ExactAmplitude conj() const { return {a_, b_, -c_, -d_, e_}; }

    friend ExactAmplitude operator+(ExactAmplitude x, ExactAmplitude y) {
        using namespace detail;
        while (x.e_ < y.e_) x.times_sqrt2_raw();
        while (y.e_ < x.e_) y.times_sqrt2_raw();
        return {add(x.a_, y.a_), add(x.b_, y.b_), add(x.c_, y.c_), add(x.d_, y.d_), x.e_};
    }
    friend ExactAmplitude operator-(const ExactAmplitude& x, const ExactAmplitude& y) { return x + (-y); }

    friend ExactAmplitude operator*(const ExactAmplitude& x, const ExactAmplitude& y) {
        using namespace detail;
        // real parts p = a+b√2, imaginary q = c+d√2
        auto rmul = [](i128 a1, i128 b1, i128 a2, i128 b2, i128& ra, i128& rb) {
            ra = add(mul(a1, a2), mul(2, mul(b1, b2)));
            rb = add(mul(a1, b2), mul(b1, a2));
        };
        i128 pa, pb, qa, qb, ra, rb, sa, sb;
        rmul(x.a_, x.b_, y.a_, y.b_, pa, pb);  // Re x Re y
        rmul(x.c_, x.d_, y.c_, y.d_, qa, qb);  // Im x Im y
        rmul(x.a_, x.b_, y.c_, y.d_, ra, rb);  // Re x Im y
        rmul(x.c_, x.d_, y.a_, y.b_, sa, sb);  // Im x Re y
        return {sub(pa, qa), sub(pb, qb), add(ra, sa), add(rb, sb), x.e_ + y.e_};
    }
    ExactAmplitude& operator+=(const ExactAmplitude& o) { return *this = *this + o; }
    ExactAmplitude& operator*=(const ExactAmplitude& o) { return *this = *this * o; }

    ExactAmplitude norm_sq() const { return *this * conj(); }
    // (x + conj x)/2
    ExactAmplitude real_part() const { return {a_, b_, 0, 0, e_}; }

    std::complex<double> to_complex() const {
        const double r2 = std::sqrt(2.0);
        double scale = std::pow(r2, -e_);
        return {((double)a_ + (double)b_ * r2) * scale, ((double)c_ + (double)d_ * r2) * scale};
    }

    std::string to_string() const {
        return "(" + i128_to_string(a_) + " + " + i128_to_string(b_) + "√2) + (" + i128_to_string(c_) + " + " +
               i128_to_string(d_) + "√2)i / √2^" + std::to_string(e_);
    }
    std::string to_tuple() const {
        return "(" + i128_to_string(a_) + "," + i128_to_string(b_) + "," + i128_to_string(c_) + "," +
               i128_to_string(d_) + "," + std::to_string(e_) + ")";
    }
    static ExactAmplitude from_tuple(const std::string& s);

private:
    void times_sqrt2_raw() {
        using namespace detail;
        // (a + b√2)√2 = 2b + a√2, and one more power in the denominator
        i128 na = mul(2, b_), nb = a_, nc = mul(2, d_), nd = c_;
        a_ = na; b_ = nb; c_ = nc; d_ = nd;
        ++e_;
    }
    void canonicalize() {
        if (is_zero()) {
            e_ = 0;
            return;
        }
        while (e_ > 0 && a_ % 2 == 0 && c_ % 2 == 0) {
            i128 na = b_, nb = a_ / 2, nc = d_, nd = c_ / 2;
            a_ = na; b_ = nb; c_ = nc; d_ = nd;
            --e_;
        }
    }

    i128 a_ = 0, b_ = 0, c_ = 0, d_ = 0;
    int e_ = 0;
};

inline ExactAmplitude ExactAmplitude::from_tuple(const std::string& s) {
    i128 v[4] = {0, 0, 0, 0};
    long long e = 0;
    size_t pos = s.find('(');
    if (pos == std::string::npos) throw std::invalid_argument("amplitude tuple: missing '(' in \"" + s + "\"");
    ++pos;
    for (int k = 0; k < 5; ++k) {
        while (pos < s.size() && s[pos] == ' ') ++pos;
        bool neg = false;
        if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) neg = s[pos++] == '-';
        if (pos >= s.size() || !isdigit((unsigned char)s[pos]))
            throw std::invalid_argument("amplitude tuple: expected integer at position " + std::to_string(pos));
        i128 acc = 0;
        while (pos < s.size() && isdigit((unsigned char)s[pos]))
            acc = detail::add(detail::mul(acc, 10), s[pos++] - '0');
        if (neg) acc = -acc;
        if (k < 4) v[k] = acc;
        else e = (long long)acc;
        while (pos < s.size() && s[pos] == ' ') ++pos;
        char want = k < 4 ? ',' : ')';
        if (pos >= s.size() || s[pos] != want)
            throw std::invalid_argument(std::string("amplitude tuple: expected '") + want + "' at position " +
                                        std::to_string(pos));
        ++pos;
    }
    return {v[0], v[1], v[2], v[3], (int)e};
}

// e^{iπk/4}
class EighthRootPhase {
public:
    constexpr EighthRootPhase() = default;
    constexpr explicit EighthRootPhase(int k) : k_(((k % 8) + 8) % 8) {}
    constexpr int k() const { return k_; }
    friend constexpr EighthRootPhase operator*(EighthRootPhase x, EighthRootPhase y) { return EighthRootPhase(x.k_ + y.k_); }
    constexpr EighthRootPhase inverse() const { return EighthRootPhase(-k_); }
    friend constexpr bool operator==(EighthRootPhase, EighthRootPhase) = default;

    ExactAmplitude amplitude() const {
        switch (k_) {
            case 0: return {1, 0, 0, 0, 0};
            case 1: return {1, 0, 1, 0, 1};
            case 2: return {0, 0, 1, 0, 0};
            case 3: return {-1, 0, 1, 0, 1};
            case 4: return {-1, 0, 0, 0, 0};
            case 5: return {-1, 0, -1, 0, 1};
            case 6: return {0, 0, -1, 0, 0};
            default: return {1, 0, -1, 0, 1};
        }
    }

private:
    int k_ = 0;
};

inline ExactAmplitude omega(int k) { return EighthRootPhase(k).amplitude(); }

// If x = √2^j · e^{iπk/4} for integers j, k, sets them and returns true.
inline bool as_scaled_root(const ExactAmplitude& x, int& j, int& k) {
    if (x.is_zero()) return false;
    ExactAmplitude n = x.norm_sq();  // must be 2^j
    if (!n.is_real() || n.b() != 0 || n.a() <= 0) return false;
    int jx;
    if (n.e() == 0 && (n.a() & (n.a() - 1)) == 0) {
        jx = 0;
        for (i128 t = n.a(); t > 1; t >>= 1) ++jx;
    } else if (n.a() == 1 && n.e() % 2 == 0) {
        jx = -n.e() / 2;
    } else {
        return false;
    }
    ExactAmplitude unit = jx >= 0 ? x * ExactAmplitude::inv_sqrt2_pow(jx) : x * ExactAmplitude::sqrt2_pow(-jx);
    for (int kk = 0; kk < 8; ++kk) {
        if (unit == omega(kk)) {
            j = jx;
            k = kk;
            return true;
        }
    }
    return false;
}

}  // namespace tsim
