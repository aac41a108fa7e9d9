#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "field.hpp"

namespace drbc {

// Lattice Z*a + Z*(c + d*omega), d | a, d | c, 0 <= c < a. For Q: (n, 0, 1).
struct IntegralIdeal {
    Int a = 1;
    Int c = 0;
    Int d = 1;

    Int norm() const { return mul(a, d); }
    bool is_one() const { return a == 1 && d == 1; }

    // Order by norm first, then the HNF triple.
    friend auto operator<=>(const IntegralIdeal& x, const IntegralIdeal& y) {
        return std::make_tuple(x.norm(), x.a, x.c, x.d) <=> std::make_tuple(y.norm(), y.a, y.c, y.d);
    }
    friend bool operator==(const IntegralIdeal& x, const IntegralIdeal& y) {
        return x.a == y.a && x.c == y.c && x.d == y.d;
    }
};

inline std::string to_string(const IntegralIdeal& I) {
    return "(" + std::to_string(I.a) + "," + std::to_string(I.c) + "," + std::to_string(I.d) + ")";
}

inline IntegralIdeal unit_ideal() { return {1, 0, 1}; }

// HNF of the Z-lattice spanned by vecs (must have full rank).
inline IntegralIdeal hnf_lattice(const NumberField& K, const std::vector<Elem>& vecs) {
    if (K.is_rational()) {
        Int g = 0;
        for (auto& v : vecs) {
            if (v.x1 != 0) throw std::logic_error("rational lattice with omega part");
            g = gcd(g, v.x0);
        }
        if (g == 0) throw std::domain_error("zero ideal");
        return {g, 0, 1};
    }
    // pure rational vectors first, so later entries can be reduced mod a
    Int a = 0;
    for (auto& v : vecs)
        if (v.x1 == 0) a = gcd(a, v.x0);
    Elem piv{0, 0};
    auto red = [&](Elem v) {
        if (a != 0) v.x0 = mod(v.x0, a);
        return v;
    };
    for (auto v : vecs) {
        if (v.x1 == 0) continue;
        v = red(v);
        if (piv.x1 == 0) {
            piv = v;
            continue;
        }
        auto e = egcd(piv.x1, v.x1);
        Elem z = esub(escale(piv, v.x1 / e.g), escale(v, piv.x1 / e.g));
        a = gcd(a, z.x0);
        piv = red(eadd(escale(piv, e.s), escale(v, e.t)));
    }
    if (a == 0 || piv.x1 == 0) throw std::domain_error("lattice not of full rank");
    if (piv.x1 < 0) piv = eneg(piv);
    Int c = mod(piv.x0, a);
    return {a, c, piv.x1};
}

inline std::vector<Elem> basis(const NumberField& K, const IntegralIdeal& I) {
    if (K.is_rational()) return {{I.a, 0}};
    return {{I.a, 0}, {I.c, I.d}};
}

// O_K-ideal generated by the given elements.
inline IntegralIdeal ideal_from_generators(const NumberField& K, const std::vector<Elem>& gens) {
    std::vector<Elem> vecs;
    for (auto& g : gens)
        if (K.is_quadratic() && !g.is_zero()) vecs.push_back({iabs(enorm(K, g)), 0});
    for (auto& g : gens) {
        vecs.push_back(g);
        if (K.is_quadratic()) vecs.push_back(emul(K, g, {0, 1}));
    }
    return hnf_lattice(K, vecs);
}

inline IntegralIdeal principal(const NumberField& K, const Elem& x) { return ideal_from_generators(K, {x}); }

inline IntegralIdeal principal(const NumberField& K, Int n) { return principal(K, Elem{n, 0}); }

inline IntegralIdeal ideal_mul(const NumberField& K, const IntegralIdeal& I, const IntegralIdeal& J) {
    if (K.is_rational()) return {mul(I.a, J.a), 0, 1};
    std::vector<Elem> vecs{{mul(I.norm(), J.norm()), 0}};
    for (auto& x : basis(K, I))
        for (auto& y : basis(K, J)) vecs.push_back(emul(K, x, y));
    return hnf_lattice(K, vecs);
}

inline IntegralIdeal ideal_pow(const NumberField& K, const IntegralIdeal& I, int e) {
    IntegralIdeal r = unit_ideal();
    for (int i = 0; i < e; ++i) r = ideal_mul(K, r, I);
    return r;
}

// Sum lattice, i.e. gcd.
inline IntegralIdeal ideal_gcd(const NumberField& K, const IntegralIdeal& I, const IntegralIdeal& J) {
    auto v = basis(K, I);
    auto w = basis(K, J);
    v.insert(v.end(), w.begin(), w.end());
    return hnf_lattice(K, v);
}

inline bool contains(const NumberField& K, const IntegralIdeal& I, const Elem& x) {
    if (K.is_rational()) return x.x1 == 0 && x.x0 % I.a == 0;
    if (x.x1 % I.d != 0) return false;
    Int k = x.x1 / I.d;
    return sub(x.x0, mul(k, I.c)) % I.a == 0;
}

// True iff J divides I (I is contained in J).
inline bool divides(const NumberField& K, const IntegralIdeal& J, const IntegralIdeal& I) {
    for (auto& x : basis(K, I))
        if (!contains(K, J, x)) return false;
    return true;
}

inline IntegralIdeal ideal_conj(const NumberField& K, const IntegralIdeal& I) {
    if (K.is_rational()) return I;
    return hnf_lattice(K, {{I.a, 0}, econj(K, {I.c, I.d})});
}

inline IntegralIdeal ideal_scale(const NumberField& K, const IntegralIdeal& I, Int k) {
    if (k <= 0) throw std::domain_error("ideal_scale: k must be positive");
    if (K.is_rational()) return {mul(I.a, k), 0, 1};
    return {mul(I.a, k), mul(I.c, k), mul(I.d, k)};
}

// Largest rational integer n with I contained in n*O_K.
inline Int content(const NumberField& K, const IntegralIdeal& I) { return K.is_rational() ? I.a : I.d; }

// I/J, requires J | I.
inline IntegralIdeal ideal_div(const NumberField& K, const IntegralIdeal& I, const IntegralIdeal& J) {
    if (!divides(K, J, I)) throw std::domain_error("ideal_div: not divisible");
    if (K.is_rational()) return {I.a / J.a, 0, 1};
    IntegralIdeal P = ideal_mul(K, I, ideal_conj(K, J));
    Int n = J.norm();
    if (P.a % n || P.c % n || P.d % n) throw std::logic_error("ideal_div: inexact quotient");
    return {P.a / n, P.c / n, P.d / n};
}

inline IntegralIdeal ideal_lcm(const NumberField& K, const IntegralIdeal& I, const IntegralIdeal& J) {
    return ideal_div(K, ideal_mul(K, I, J), ideal_gcd(K, I, J));
}

inline bool coprime(const NumberField& K, const IntegralIdeal& I, const IntegralIdeal& J) {
    return ideal_gcd(K, I, J).is_one();
}

// Prime ideals above the rational prime p, sorted.
inline std::vector<IntegralIdeal> primes_above(const NumberField& K, Int p) {
    if (K.is_rational()) return {{p, 0, 1}};
    std::vector<Int> roots;
    for (Int r = 0; r < p; ++r) {
        Int v = mod(sub(sub(mul(r, r), mul(K.t(), r)), K.n()), p);
        if (v == 0) roots.push_back(r);
    }
    std::vector<IntegralIdeal> out;
    if (roots.empty()) {
        out.push_back({p, 0, p});
    } else {
        for (Int r : roots) out.push_back(ideal_from_generators(K, {{p, 0}, {-r, 1}}));
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct PrimePower {
    IntegralIdeal prime;
    int exponent;
    bool operator==(const PrimePower&) const = default;
};

inline std::vector<PrimePower> factor_ideal(const NumberField& K, IntegralIdeal I) {
    std::vector<PrimePower> out;
    for (auto& [p, e] : factor_int(I.norm())) {
        (void)e;
        for (auto& P : primes_above(K, p)) {
            int k = 0;
            while (divides(K, P, I)) {
                I = ideal_div(K, I, P);
                ++k;
            }
            if (k) out.push_back({P, k});
        }
    }
    if (!I.is_one()) throw std::logic_error("factor_ideal: leftover cofactor");
    std::sort(out.begin(), out.end(), [](auto& x, auto& y) { return x.prime < y.prime; });
    return out;
}

// Ramification index and residue degree of P over p.
inline std::pair<int, int> splitting_data(const NumberField& K, const IntegralIdeal& P) {
    Int p = P.a;
    if (K.is_rational()) return {1, 1};
    auto ps = primes_above(K, p);
    int f = P.norm() == p ? 1 : 2;
    if (ps.size() == 1 && f == 1) return {2, 1};
    return {1, f};
}

inline std::vector<IntegralIdeal> divisors(const NumberField& K, const IntegralIdeal& f) {
    std::vector<IntegralIdeal> out{unit_ideal()};
    for (auto& pp : factor_ideal(K, f)) {
        std::vector<IntegralIdeal> next;
        for (auto& d : out) {
            IntegralIdeal x = d;
            next.push_back(x);
            for (int i = 0; i < pp.exponent; ++i) {
                x = ideal_mul(K, x, pp.prime);
                next.push_back(x);
            }
        }
        out = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// All nonzero integral ideals of norm <= B, sorted by (norm, HNF).
inline std::vector<IntegralIdeal> ideals_up_to(const NumberField& K, Int B) {
    std::vector<std::pair<IntegralIdeal, Int>> primes;
    for (Int p : primes_up_to(B))
        for (auto& P : primes_above(K, p))
            if (P.norm() <= B) primes.emplace_back(P, P.norm());
    std::sort(primes.begin(), primes.end(), [](auto& x, auto& y) { return x.second < y.second || (x.second == y.second && x.first < y.first); });
    std::vector<IntegralIdeal> out;
    auto dfs = [&](auto& self, std::size_t i, const IntegralIdeal& cur, Int N) -> void {
        out.push_back(cur);
        for (std::size_t j = i; j < primes.size(); ++j) {
            Int q = primes[j].second;
            if (N > B / q) break;
            IntegralIdeal x = cur;
            Int xn = N;
            while (xn <= B / q) {
                x = ideal_mul(K, x, primes[j].first);
                xn *= q;
                self(self, j + 1, x, xn);
            }
        }
    };
    dfs(dfs, 0, unit_ideal(), 1);
    std::sort(out.begin(), out.end());
    return out;
}

// (1/den) * num, reduced.
struct FractionalIdeal {
    IntegralIdeal num;
    Int den = 1;
    bool operator==(const FractionalIdeal&) const = default;
};

inline FractionalIdeal make_fractional(const NumberField& K, IntegralIdeal num, Int den) {
    if (den <= 0) throw std::domain_error("fractional ideal: bad denominator");
    Int g = gcd(den, content(K, num));
    if (g > 1) {
        if (K.is_rational()) num = {num.a / g, 0, 1};
        else num = {num.a / g, num.c / g, num.d / g};
        den /= g;
    }
    return {num, den};
}

inline FractionalIdeal ideal_inverse(const NumberField& K, const IntegralIdeal& I) {
    if (K.is_rational()) return make_fractional(K, unit_ideal(), I.a);
    return make_fractional(K, ideal_conj(K, I), I.norm());
}

inline FractionalIdeal frac_mul(const NumberField& K, const FractionalIdeal& x, const FractionalIdeal& y) {
    return make_fractional(K, ideal_mul(K, x.num, y.num), mul(x.den, y.den));
}

inline FractionalIdeal as_fractional(const IntegralIdeal& I) { return {I, 1}; }

inline bool frac_contains(const NumberField& K, const FractionalIdeal& F, const FieldElement& x) {
    // x = n/e in (1/t) N  iff  t*n in e*N
    Elem tn = escale(x.num, F.den);
    return contains(K, ideal_scale(K, F.num, x.den), tn);
}

// O_K / f with canonical coset representatives r0 + r1*omega, 0 <= r0 < a, 0 <= r1 < d.
class ResidueRing {
public:
    ResidueRing() = default;
    ResidueRing(const NumberField& K, const IntegralIdeal& f, bool with_units = true) : K_(K), f_(f) {
        size_ = f.norm();
        if (!with_units) return;
        unit_.assign(static_cast<std::size_t>(size_), 0);
        for (Int i = 0; i < size_; ++i) {
            Elem x = elem(i);
            bool u = x.is_zero() ? f.is_one() : coprime(K_, principal(K_, x), f_);
            unit_[i] = u;
            if (u) units_.push_back(i);
        }
    }

    const NumberField& field() const { return K_; }
    const IntegralIdeal& modulus() const { return f_; }
    Int size() const { return size_; }

    Int index(const Elem& x) const {
        if (K_.is_rational()) return mod(x.x0, f_.a);
        Int k = floordiv(x.x1, f_.d);
        Int r1 = sub(x.x1, mul(k, f_.d));
        Int r0 = mod(sub(x.x0, mul(k, f_.c)), f_.a);
        return add(mul(r1, f_.a), r0);
    }

    Elem elem(Int i) const {
        if (K_.is_rational()) return {i, 0};
        return {i % f_.a, i / f_.a};
    }

    Elem reduce(const Elem& x) const { return elem(index(x)); }

    Int mul_idx(Int i, Int j) const { return index(emul(K_, elem(i), elem(j))); }
    Int mul_elem(Int i, const Elem& x) const { return index(emul(K_, elem(i), x)); }

    bool is_unit(Int i) const { return unit_[i]; }
    const std::vector<Int>& units() const { return units_; }
    Int one() const { return index({1, 0}); }

private:
    NumberField K_;
    IntegralIdeal f_;
    Int size_ = 1;
    std::vector<char> unit_;
    std::vector<Int> units_;
};

// Deterministic totally positive lift r + k*a with the least k >= 0.
inline Elem totally_positive_lift(const NumberField& K, const IntegralIdeal& f, const Elem& r_in, bool nonzero_required = true) {
    Elem r;
    if (K.is_rational()) r = {mod(r_in.x0, f.a), 0};
    else {
        Int k = floordiv(r_in.x1, f.d);
        r = {mod(sub(r_in.x0, mul(k, f.c)), f.a), sub(r_in.x1, mul(k, f.d))};
    }
    if (K.is_imaginary()) {
        if (r.is_zero() && nonzero_required) return {f.a, 0};
        return r;
    }
    // zero is never totally positive, so nonzero_required is automatic here
    for (Int k = 0;; ++k) {
        Elem y{add(r.x0, mul(k, f.a)), r.x1};
        if (totally_positive(K, y)) return y;
    }
}

}  // namespace drbc
