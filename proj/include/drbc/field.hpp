#pragma once

#include <cmath>
#include <compare>
#include <sstream>
#include <stdexcept>
#include <string>

#include "arith.hpp"

namespace drbc {

// K = Q, or Q(sqrt m) with O_K = Z + Z*omega and omega^2 = t*omega + n.
class NumberField {
public:
    static NumberField rational() { return NumberField(); }

    static NumberField quadratic(Int m) {
        if (m == 0 || m == 1) throw std::invalid_argument("degenerate m (0 or 1)");
        if (!is_squarefree(m)) throw std::invalid_argument("m is not squarefree: " + std::to_string(m));
        NumberField K;
        K.m_ = m;
        if (mod(m, 4) == 1) {
            K.t_ = 1;
            K.n_ = (m - 1) / 4;
            K.disc_ = m;
        } else {
            K.t_ = 0;
            K.n_ = m;
            K.disc_ = mul(4, m);
        }
        K.r1_ = m > 0 ? 2 : 0;
        K.r2_ = m > 0 ? 0 : 1;
        return K;
    }

    // 0 (or "Q", "rational") selects the rationals.
    static NumberField from_tag(Int m) { return m == 0 ? rational() : quadratic(m); }

    static NumberField parse(const std::string& s) {
        if (s == "Q" || s == "q" || s == "rational" || s == "Rational") return rational();
        std::size_t pos = 0;
        Int m = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("bad field spec: " + s);
        return from_tag(m);
    }

    bool is_rational() const { return m_ == 0; }
    bool is_quadratic() const { return m_ != 0; }
    bool is_real() const { return r1_ > 0; }
    bool is_imaginary() const { return r1_ == 0; }
    Int m() const { return m_; }
    Int t() const { return t_; }
    Int n() const { return n_; }
    Int discriminant() const { return disc_; }
    int degree() const { return m_ == 0 ? 1 : 2; }
    int r1() const { return r1_; }
    int r2() const { return r2_; }

    std::string tag() const {
        if (m_ == 0) return "Q";
        return "Q(sqrt(" + std::to_string(m_) + "))";
    }

    std::string omega_name() const {
        if (m_ == 0) return "";
        if (t_ == 1) return "(1+sqrt(" + std::to_string(m_) + "))/2";
        return "sqrt(" + std::to_string(m_) + ")";
    }

    bool operator==(const NumberField& o) const { return m_ == o.m_; }

private:
    Int m_ = 0;
    Int t_ = 0;
    Int n_ = 0;
    Int disc_ = 1;
    int r1_ = 1;
    int r2_ = 0;
};

// Integral element x0 + x1*omega.
struct Elem {
    Int x0 = 0;
    Int x1 = 0;
    auto operator<=>(const Elem&) const = default;
    bool is_zero() const { return x0 == 0 && x1 == 0; }
};

inline Elem eadd(const Elem& a, const Elem& b) { return {add(a.x0, b.x0), add(a.x1, b.x1)}; }
inline Elem esub(const Elem& a, const Elem& b) { return {sub(a.x0, b.x0), sub(a.x1, b.x1)}; }
inline Elem escale(const Elem& a, Int k) { return {mul(a.x0, k), mul(a.x1, k)}; }
inline Elem eneg(const Elem& a) { return {-a.x0, -a.x1}; }

inline Elem emul(const NumberField& K, const Elem& a, const Elem& b) {
    Int bd = mul(a.x1, b.x1);
    Int r0 = add(mul(a.x0, b.x0), mul(bd, K.n()));
    Int r1 = add(add(mul(a.x0, b.x1), mul(a.x1, b.x0)), mul(bd, K.t()));
    return {r0, r1};
}

inline Int enorm(const NumberField& K, const Elem& a) {
    if (K.is_rational()) return a.x0;
    return sub(add(mul(a.x0, a.x0), mul(mul(a.x0, a.x1), K.t())), mul(mul(a.x1, a.x1), K.n()));
}

inline Int etrace(const NumberField& K, const Elem& a) {
    if (K.is_rational()) return a.x0;
    return add(mul(2, a.x0), mul(a.x1, K.t()));
}

// Galois conjugate: omega -> t - omega.
inline Elem econj(const NumberField& K, const Elem& a) {
    if (K.is_rational()) return a;
    return {add(a.x0, mul(a.x1, K.t())), -a.x1};
}

namespace detail {

// Sign of p + q*sqrt(m), m > 0 not a square. Exact.
inline int sign_pq(Int p, Int q, Int m) {
    auto sg = [](Int v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); };
    if (q == 0) return sg(p);
    if (p == 0) return sg(q);
    if (sg(p) == sg(q)) return sg(p);
    __int128 p2 = static_cast<__int128>(p) * p;
    __int128 q2m = static_cast<__int128>(q) * q * m;
    return p2 > q2m ? sg(p) : sg(q);
}

}  // namespace detail

// Sign of the i-th real embedding (i = 0 sends sqrt m to the positive root).
inline int embedding_sign(const NumberField& K, const Elem& a, int i) {
    if (K.is_rational()) return a.x0 > 0 ? 1 : (a.x0 < 0 ? -1 : 0);
    if (!K.is_real()) throw std::logic_error("no real embeddings");
    Int p = add(mul(2, a.x0), mul(a.x1, K.t()));
    Int q = mul(a.x1, K.t() == 1 ? 1 : 2);
    return detail::sign_pq(p, i == 0 ? q : -q, K.m());
}

// Bit i set iff the i-th real embedding is negative. Zero for imaginary fields.
inline unsigned sign_mask(const NumberField& K, const Elem& a) {
    unsigned mask = 0;
    for (int i = 0; i < K.r1(); ++i)
        if (embedding_sign(K, a, i) < 0) mask |= 1u << i;
    return mask;
}

inline bool totally_positive(const NumberField& K, const Elem& a) {
    if (a.is_zero()) return false;
    for (int i = 0; i < K.r1(); ++i)
        if (embedding_sign(K, a, i) <= 0) return false;
    return true;
}

// Floating approximations, used only to size search boxes.
inline double omega_value(const NumberField& K, int i) {
    double s = std::sqrt(std::fabs(static_cast<double>(K.m())));
    if (i == 1) s = -s;
    return K.t() == 1 ? (1.0 + s) / 2.0 : s;
}

inline double embedding_approx(const NumberField& K, const Elem& a, int i) {
    if (K.is_rational()) return static_cast<double>(a.x0);
    return static_cast<double>(a.x0) + static_cast<double>(a.x1) * omega_value(K, i);
}

inline std::string to_string(const NumberField& K, const Elem& a) {
    if (K.is_rational() || a.x1 == 0) return std::to_string(a.x0);
    std::ostringstream os;
    std::string w = K.t() == 1 ? "w" : "sqrt(" + std::to_string(K.m()) + ")";
    if (a.x0 != 0) os << a.x0 << (a.x1 > 0 ? "+" : "-");
    else if (a.x1 < 0) os << "-";
    Int b = iabs(a.x1);
    if (b != 1) os << b << "*";
    os << w;
    return os.str();
}

// Field element (num)/den with den > 0, reduced.
struct FieldElement {
    Elem num;
    Int den = 1;

    static FieldElement make(Elem num, Int den) {
        if (den == 0) throw std::domain_error("zero denominator");
        if (den < 0) {
            num = eneg(num);
            den = -den;
        }
        Int g = gcd(gcd(num.x0, num.x1), den);
        if (g > 1) {
            num.x0 /= g;
            num.x1 /= g;
            den /= g;
        }
        return {num, den};
    }
    bool integral() const { return den == 1; }
    bool operator==(const FieldElement&) const = default;
};

inline std::string to_string(const NumberField& K, const FieldElement& x) {
    if (x.den == 1) return to_string(K, x.num);
    return "(" + to_string(K, x.num) + ")/" + std::to_string(x.den);
}

}  // namespace drbc
