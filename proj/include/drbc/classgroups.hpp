#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "abelian.hpp"
#include "units.hpp"

namespace drbc {

// |(O_K/f)^x| by the local formula.
inline Int euler_phi(const NumberField& K, const IntegralIdeal& f) {
    Int r = 1;
    for (auto& pp : factor_ideal(K, f)) {
        Int q = pp.prime.norm();
        r = mul(r, mul(ipow(q, pp.exponent - 1), q - 1));
    }
    return r;
}

struct TotientReport {
    IntegralIdeal f;
    std::vector<std::pair<IntegralIdeal, Int>> terms;
    Int sum = 0;
    Int norm = 0;
    bool ok() const { return sum == norm; }
};

inline TotientReport verify_totient_identity(const NumberField& K, const IntegralIdeal& f) {
    TotientReport r;
    r.f = f;
    r.norm = f.norm();
    for (auto& d : divisors(K, f)) {
        Int phi = euler_phi(K, d);
        r.terms.emplace_back(d, phi);
        r.sum = add(r.sum, phi);
    }
    if (!r.ok()) throw std::logic_error("totient identity failed for " + to_string(f));
    return r;
}

inline double minkowski_bound(const NumberField& K) {
    if (K.is_rational()) return 1.0;
    double D = std::sqrt(std::fabs(static_cast<double>(K.discriminant())));
    return K.is_real() ? D / 2.0 : 2.0 * D / M_PI;
}

struct ClassGroup {
    std::vector<IntegralIdeal> reps;
    FiniteAbelianGroup group;
};

// Image of O_K^x in (O/g)^x times sign vectors, as (residue index, sign mask) pairs.
struct UnitImage {
    std::vector<std::pair<Int, unsigned>> elems;
    std::set<std::pair<Int, unsigned>> members;

    std::size_t size() const { return elems.size(); }
    bool contains(Int res, unsigned mask) const { return members.count({res, mask}) > 0; }
    // residues of totally positive units
    std::vector<Int> totally_positive_residues() const {
        std::set<Int> s;
        for (auto& [r, m] : elems)
            if (m == 0) s.insert(r);
        return {s.begin(), s.end()};
    }
};

struct RayClassGroup {
    IntegralIdeal conductor;
    std::vector<IntegralIdeal> reps;  // reps[i] represents class i, reps[0] = (1)
    FiniteAbelianGroup group;
    std::map<Int, Int> key_to_class;
    Int structural_order = 0;
    Int enumerated_order = 0;
    Int search_bound = 0;
    std::map<Int, Int> j;  // unit residue index -> class

    Int order() const { return group.order(); }
};

class Arithmetic {
public:
    explicit Arithmetic(NumberField K) : K_(K), U_(unit_group(K)) {}

    const NumberField& field() const { return K_; }
    const UnitGroup& units() const { return U_; }

    std::optional<Elem> generator(const IntegralIdeal& C) const {
        auto it = gen_cache_.find(C);
        if (it != gen_cache_.end()) return it->second;
        auto g = find_generator(K_, U_, C);
        gen_cache_.emplace(C, g);
        return g;
    }

    RaySearchResult search(const FractionalIdeal& c, const std::optional<FractionalIdeal>& modulus, bool tp) const {
        auto P = clear_denominators(K_, c, modulus);
        auto y0 = generator(P.C);
        if (!y0) return {RaySearch::NotPrincipal, std::nullopt};
        return ray_search_from(K_, U_, *y0, P.C, P.M, P.L, P.L, tp);
    }

    // a ~_f b: some totally positive x in 1 + f b^{-1} with (x) = a b^{-1}.
    bool dr_equivalent(const IntegralIdeal& a, const IntegralIdeal& b, const IntegralIdeal& f) const {
        if (ideal_gcd(K_, a, f) != ideal_gcd(K_, b, f)) return false;
        FractionalIdeal binv = ideal_inverse(K_, b);
        FractionalIdeal c = frac_mul(K_, as_fractional(a), binv);
        FractionalIdeal m = frac_mul(K_, as_fractional(f), binv);
        return search(c, m, true).found();
    }

    bool same_ideal_class(const IntegralIdeal& a, const IntegralIdeal& b) const {
        FractionalIdeal c = frac_mul(K_, as_fractional(a), ideal_inverse(K_, b));
        return search(c, std::nullopt, false).found();
    }

    // All ideals of norm <= B (copy; the cache may grow under later calls).
    std::vector<IntegralIdeal> ideals(Int B) const {
        if (B > ideal_bound_) {
            ideal_cache_ = ideals_up_to(K_, B);
            ideal_bound_ = B;
        }
        auto end = std::upper_bound(ideal_cache_.begin(), ideal_cache_.end(), B, [](Int b, const IntegralIdeal& I) { return b < I.norm(); });
        return {ideal_cache_.begin(), end};
    }

    const ClassGroup& class_group() const {
        if (cl_) return *cl_;
        auto cl = std::make_unique<ClassGroup>();
        Int B = std::max<Int>(1, static_cast<Int>(std::floor(minkowski_bound(K_))));
        for (auto& a : ideals(B)) {
            bool found = false;
            for (auto& r : cl->reps)
                if (same_ideal_class(a, r)) {
                    found = true;
                    break;
                }
            if (!found) cl->reps.push_back(a);
        }
        const Int h = static_cast<Int>(cl->reps.size());
        std::vector<std::vector<Int>> table(h, std::vector<Int>(h));
        cl_ = std::move(cl);  // classify_ideal_class below needs reps
        for (Int i = 0; i < h; ++i)
            for (Int j = 0; j < h; ++j) table[i][j] = ideal_class(ideal_mul(K_, cl_->reps[i], cl_->reps[j]));
        cl_->group = FiniteAbelianGroup(table, 0);
        return *cl_;
    }

    Int class_number() const { return class_group().group.order(); }

    Int ideal_class(const IntegralIdeal& a) const {
        const auto& reps = cl_ ? cl_->reps : class_group().reps;
        for (std::size_t j = 0; j < reps.size(); ++j)
            if (same_ideal_class(a, reps[j])) return static_cast<Int>(j);
        throw std::logic_error("ideal_class: no class found for " + to_string(a));
    }

    const UnitImage& unit_image(const IntegralIdeal& g) const {
        auto it = unit_image_.find(g);
        if (it != unit_image_.end()) return *it->second;
        auto im = std::make_unique<UnitImage>();
        ResidueRing R(K_, g, false);
        std::pair<Int, unsigned> s0{R.one(), 0u};
        im->elems.push_back(s0);
        im->members.insert(s0);
        auto gens = U_.generators();
        for (std::size_t q = 0; q < im->elems.size(); ++q) {
            auto [r, m] = im->elems[q];
            for (auto& u : gens) {
                std::pair<Int, unsigned> nx{R.mul_elem(r, u), m ^ sign_mask(K_, u)};
                if (im->members.insert(nx).second) im->elems.push_back(nx);
            }
        }
        auto& ref = *im;
        unit_image_.emplace(g, std::move(im));
        return ref;
    }

    // Class reps coprime to g, one per ideal class, used to normalize ray keys.
    const std::vector<IntegralIdeal>& coprime_class_reps(const IntegralIdeal& g) const {
        auto it = coprime_reps_.find(g);
        if (it != coprime_reps_.end()) return it->second;
        const Int h = class_number();
        std::vector<std::optional<IntegralIdeal>> found(h);
        Int left = h;
        for (Int B = 16; left > 0; B *= 2) {
            if (B > (1 << 22)) throw std::runtime_error("coprime_class_reps: bound exhausted");
            for (auto& a : ideals(B)) {
                if (a.norm() > B) break;
                if (gcd(a.norm(), g.norm()) != 1) continue;
                Int k = ideal_class(a);
                if (!found[k]) {
                    found[k] = a;
                    --left;
                }
            }
        }
        std::vector<IntegralIdeal> out;
        for (auto& x : found) out.push_back(*x);
        return coprime_reps_.emplace(g, out).first->second;
    }

    // Complete invariant of the strict ray class of a mod g (a coprime to g).
    Int ray_key(const IntegralIdeal& a, const IntegralIdeal& g) const {
        const Int k = ideal_class(a);
        const auto& r = coprime_class_reps(g)[k];
        FractionalIdeal inv = ideal_inverse(K_, r);
        auto y = generator(ideal_mul(K_, a, inv.num));
        if (!y) throw std::logic_error("ray_key: expected principal ideal");
        ResidueRing R(K_, g, false);
        Int res = R.mul_elem(R.index(*y), Elem{modinv(inv.den, g.a), 0});
        unsigned mask = sign_mask(K_, *y);
        const auto& H = unit_image(g);
        const Int span = mul(R.size(), Int{1} << K_.r1());
        Int best = -1;
        for (auto& [hr, hm] : H.elems) {
            Int code = add(mul(R.mul_idx(hr, res), Int{1} << K_.r1()), static_cast<Int>(hm ^ mask));
            if (best < 0 || code < best) best = code;
        }
        return add(mul(k, span), best);
    }

    Int structural_ray_order(const IntegralIdeal& g) const {
        Int num = mul(mul(class_number(), euler_phi(K_, g)), Int{1} << K_.r1());
        Int den = static_cast<Int>(unit_image(g).size());
        if (num % den) throw std::logic_error("structural order is not an integer");
        return num / den;
    }

    // verify = confirm every key decision by an explicit ray_generator_search
    const RayClassGroup& ray_class_group(const IntegralIdeal& g, bool verify = true) const {
        auto it = ray_.find(g);
        if (it != ray_.end()) return *it->second;
        auto G = std::make_unique<RayClassGroup>();
        G->conductor = g;
        G->structural_order = structural_ray_order(g);
        Int B = std::max<Int>(static_cast<Int>(std::floor(minkowski_bound(K_))), mul(4, g.norm()));
        B = std::max<Int>(B, 4);
        Int scanned_to = 0;
        while (static_cast<Int>(G->reps.size()) < G->structural_order) {
            const auto list = ideals(B);
            if (static_cast<Int>(list.size()) > 1000000) throw std::runtime_error("strict_ray_class_group: increase bound (cap reached) for " + to_string(g));
            for (auto& a : list) {
                if (a.norm() > B) break;
                if (a.norm() <= scanned_to) continue;
                if (!coprime(K_, a, g)) continue;
                Int key = ray_key(a, g);
                auto kt = G->key_to_class.find(key);
                if (kt == G->key_to_class.end()) {
                    if (verify)
                        for (auto& r : G->reps)
                            if (dr_equivalent(a, r, g)) throw std::logic_error("ray key split an equivalence class at " + to_string(a));
                    G->key_to_class[key] = static_cast<Int>(G->reps.size());
                    G->reps.push_back(a);
                } else if (verify && !dr_equivalent(a, G->reps[kt->second], g)) {
                    throw std::logic_error("ray key merged inequivalent ideals at " + to_string(a));
                }
                if (static_cast<Int>(G->reps.size()) == G->structural_order) break;
            }
            scanned_to = B;
            G->search_bound = B;
            if (static_cast<Int>(G->reps.size()) < G->structural_order) B *= 2;
        }
        G->enumerated_order = static_cast<Int>(G->reps.size());
        const Int n = G->enumerated_order;
        std::vector<std::vector<Int>> table(n, std::vector<Int>(n));
        for (Int i = 0; i < n; ++i)
            for (Int j = i; j < n; ++j) {
                Int key = ray_key(ideal_mul(K_, G->reps[i], G->reps[j]), g);
                table[i][j] = table[j][i] = G->key_to_class.at(key);
            }
        G->group = FiniteAbelianGroup(table, 0);
        ResidueRing R(K_, g);
        for (Int s : R.units()) G->j[s] = G->key_to_class.at(ray_key(principal(K_, totally_positive_lift(K_, g, R.elem(s))), g));
        auto& ref = *G;
        ray_.emplace(g, std::move(G));
        return ref;
    }

    Int ray_class(const RayClassGroup& G, const IntegralIdeal& a) const {
        if (!coprime(K_, a, G.conductor)) throw std::domain_error("ray_dlog: ideal not coprime to conductor");
        return G.key_to_class.at(ray_key(a, G.conductor));
    }

    std::vector<Int> ray_dlog(const RayClassGroup& G, const IntegralIdeal& a) const { return G.group.exponents(ray_class(G, a)); }

    const FiniteAbelianGroup& narrow_class_group() const { return ray_class_group(unit_ideal()).group; }

    // Kernel of j_f decided per residue by an explicit search against (1).
    std::vector<Int> j_kernel_direct(const IntegralIdeal& g) const {
        ResidueRing R(K_, g);
        std::vector<Int> out;
        for (Int s : R.units()) {
            Elem x = totally_positive_lift(K_, g, R.elem(s));
            if (dr_equivalent(principal(K_, x), unit_ideal(), g)) out.push_back(s);
        }
        return out;
    }

    // Kernel of j_f as the residues of totally positive units.
    std::vector<Int> j_kernel_units(const IntegralIdeal& g) const { return unit_image(g).totally_positive_residues(); }

private:
    NumberField K_;
    UnitGroup U_;
    mutable std::map<IntegralIdeal, std::optional<Elem>> gen_cache_;
    mutable std::vector<IntegralIdeal> ideal_cache_;
    mutable Int ideal_bound_ = 0;
    mutable std::unique_ptr<ClassGroup> cl_;
    mutable std::map<IntegralIdeal, std::unique_ptr<UnitImage>> unit_image_;
    mutable std::map<IntegralIdeal, std::vector<IntegralIdeal>> coprime_reps_;
    mutable std::map<IntegralIdeal, std::unique_ptr<RayClassGroup>> ray_;
};

// Map C_{f'} -> C_f for f | f', on class indices.
inline std::vector<Int> ray_surjection(const Arithmetic& A, const RayClassGroup& big, const RayClassGroup& small) {
    std::vector<Int> out;
    for (auto& r : big.reps) out.push_back(A.ray_class(small, r));
    return out;
}

}  // namespace drbc
