#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "ideal.hpp"

namespace drbc {

struct UnitGroup {
    Int w = 2;             // order of the torsion subgroup
    Elem zeta{-1, 0};      // generator of the torsion subgroup
    bool has_eps = false;  // real quadratic only
    Elem eps{1, 0};
    Int eps_norm = 1;

    // Generators of O_K^x in a fixed order: zeta, then eps.
    std::vector<Elem> generators() const {
        std::vector<Elem> g{zeta};
        if (has_eps) g.push_back(eps);
        return g;
    }
};

// Fundamental unit of a real quadratic field from the continued fraction of omega.
inline Elem fundamental_unit(const NumberField& K) {
    if (!K.is_real() || K.is_rational()) throw std::logic_error("fundamental_unit: not real quadratic");
    const Int m = K.m();
    const Int s = isqrt(m);
    Int P = K.t() == 1 ? 1 : 0;
    Int Q = K.t() == 1 ? 2 : 1;
    Int p_prev = 1, p_prev2 = 0, q_prev = 0, q_prev2 = 1;
    for (int k = 0; k < 10000; ++k) {
        if (Q <= 0) throw std::logic_error("continued fraction: nonpositive Q");
        Int a = floordiv(add(P, s), Q);
        Int p = add(mul(a, p_prev), p_prev2);
        Int q = add(mul(a, q_prev), q_prev2);
        Elem u{sub(p, mul(q, K.t())), q};
        Int N = enorm(K, u);
        if (N == 1 || N == -1) return u;
        p_prev2 = p_prev;
        p_prev = p;
        q_prev2 = q_prev;
        q_prev = q;
        P = sub(mul(a, Q), P);
        Q = (sub(m, mul(P, P))) / Q;
    }
    throw std::runtime_error("fundamental_unit: period too long");
}

inline UnitGroup unit_group(const NumberField& K) {
    UnitGroup U;
    if (K.is_rational()) return U;
    if (K.is_imaginary()) {
        if (K.m() == -1) {
            U.w = 4;
            U.zeta = {0, 1};
        } else if (K.m() == -3) {
            U.w = 6;
            U.zeta = {0, 1};
        }
        return U;
    }
    U.has_eps = true;
    U.eps = fundamental_unit(K);
    U.eps_norm = enorm(K, U.eps);
    return U;
}

inline double log_eps(const NumberField& K, const UnitGroup& U) {
    if (!U.has_eps) return 0.0;
    return std::log(std::fabs(embedding_approx(K, U.eps, 0)));
}

// One generator of the integral ideal C, or nothing if C is not principal.
// Candidates live in the box where every embedding is at most eps*sqrt(N(C)).
inline std::optional<Elem> find_generator(const NumberField& K, const UnitGroup& U, const IntegralIdeal& C) {
    if (K.is_rational()) return Elem{C.a, 0};
    const Int N = C.norm();
    double B = std::sqrt(static_cast<double>(N));
    if (K.is_real()) B *= std::fabs(embedding_approx(K, U.eps, 0));
    B = B * (1.0 + 1e-9) + 1e-6;
    double delta = std::sqrt(std::fabs(static_cast<double>(K.m())));
    if (K.t() == 0) delta *= 2.0;
    Int K2 = static_cast<Int>(std::floor(2.0 * B / delta / static_cast<double>(C.d))) + 1;
    for (Int k2 = -K2; k2 <= K2; ++k2) {
        Int x1 = mul(k2, C.d);
        double lo = (-2.0 * B - static_cast<double>(K.t() * x1)) / 2.0;
        double hi = (2.0 * B - static_cast<double>(K.t() * x1)) / 2.0;
        double base = static_cast<double>(mul(k2, C.c));
        Int k1lo = static_cast<Int>(std::floor((lo - base) / static_cast<double>(C.a))) - 1;
        Int k1hi = static_cast<Int>(std::ceil((hi - base) / static_cast<double>(C.a))) + 1;
        for (Int k1 = k1lo; k1 <= k1hi; ++k1) {
            Elem y{add(mul(k1, C.a), mul(k2, C.c)), x1};
            if (y.is_zero()) continue;
            Int n = enorm(K, y);
            if (n == N || n == -N) return y;
        }
    }
    return std::nullopt;
}

enum class RaySearch { Found, NotPrincipal, NoAdmissibleGenerator };

struct RaySearchResult {
    RaySearch status = RaySearch::NotPrincipal;
    std::optional<FieldElement> x;  // omitted when the witness overflows int64
    bool found() const { return status == RaySearch::Found; }
};

namespace detail {

inline Elem checked_pow_mul(const NumberField& K, Elem y, const Elem& g, Int e) {
    for (Int i = 0; i < e; ++i) y = emul(K, y, g);
    return y;
}

}  // namespace detail

// Given a generator y0 of C, decide whether some unit multiple y = y0*u satisfies
// y == T mod M (if M is given) and y totally positive (if required).
inline RaySearchResult ray_search_from(const NumberField& K, const UnitGroup& U, const Elem& y0, const IntegralIdeal& C,
                                       const std::optional<IntegralIdeal>& M, Int T, Int L, bool require_tp) {
    // u == 1 mod R with u >> 0 leaves both conditions unchanged, so it is enough to
    // walk the image of the units in (O/R)^x times sign vectors.
    IntegralIdeal R = unit_ideal();
    if (M) R = ideal_div(K, *M, ideal_gcd(K, *M, C));
    ResidueRing ringR(K, R, false);
    std::optional<ResidueRing> ringM;
    Int target = 0;
    if (M) {
        ringM.emplace(K, *M, false);
        target = ringM->index({T, 0});
    }
    auto gens = U.generators();
    std::vector<unsigned> gmask;
    for (auto& g : gens) gmask.push_back(sign_mask(K, g));
    const unsigned y0mask = sign_mask(K, y0);

    struct State {
        Int ures;
        unsigned umask;
        Elem v;  // y0*u reduced mod M
        std::vector<Int> expo;
    };
    auto key = [&](Int ures, unsigned umask) { return std::make_pair(ures, require_tp ? umask : 0u); };
    std::map<std::pair<Int, unsigned>, char> seen;
    std::vector<State> queue;
    State s0{ringR.index({1, 0}), 0u, M ? ringM->reduce(y0) : Elem{}, std::vector<Int>(gens.size(), 0)};
    seen[key(s0.ures, s0.umask)] = 1;
    queue.push_back(s0);
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        State st = queue[qi];
        bool ok_sign = !require_tp || ((y0mask ^ st.umask) == 0);
        bool ok_cong = !M || ringM->index(st.v) == target;
        if (ok_sign && ok_cong) {
            RaySearchResult res;
            res.status = RaySearch::Found;
            try {
                Elem y = y0;
                for (std::size_t i = 0; i < gens.size(); ++i) y = detail::checked_pow_mul(K, y, gens[i], st.expo[i]);
                res.x = FieldElement::make(y, L);
            } catch (const OverflowError&) {
            }
            return res;
        }
        for (std::size_t i = 0; i < gens.size(); ++i) {
            State nx;
            nx.ures = ringR.mul_elem(st.ures, gens[i]);
            nx.umask = st.umask ^ gmask[i];
            auto k = key(nx.ures, nx.umask);
            if (seen.count(k)) continue;
            seen[k] = 1;
            nx.v = M ? ringM->reduce(emul(K, st.v, gens[i])) : Elem{};
            nx.expo = st.expo;
            nx.expo[i] += 1;
            queue.push_back(nx);
        }
    }
    return {RaySearch::NoAdmissibleGenerator, std::nullopt};
}

struct IntegralRayProblem {
    IntegralIdeal C;
    std::optional<IntegralIdeal> M;
    Int L = 1;  // x = y / L, and x - 1 in modulus  <=>  y - L in M
};

inline IntegralRayProblem clear_denominators(const NumberField& K, const FractionalIdeal& c, const std::optional<FractionalIdeal>& modulus) {
    IntegralRayProblem P;
    P.L = modulus ? lcm(c.den, modulus->den) : c.den;
    P.C = ideal_scale(K, c.num, P.L / c.den);
    if (modulus) P.M = ideal_scale(K, modulus->num, P.L / modulus->den);
    return P;
}

// Exact decision: x with (x) = c, x totally positive if required, x - 1 in modulus.
// With no modulus there is no congruence condition at all.
inline RaySearchResult ray_generator_search(const NumberField& K, const UnitGroup& U, const FractionalIdeal& c,
                                            const std::optional<FractionalIdeal>& modulus, bool require_tp) {
    auto P = clear_denominators(K, c, modulus);
    auto y0 = find_generator(K, U, P.C);
    if (!y0) return {RaySearch::NotPrincipal, std::nullopt};
    return ray_search_from(K, U, *y0, P.C, P.M, P.L, P.L, require_tp);
}

}  // namespace drbc
