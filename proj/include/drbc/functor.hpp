#pragma once

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "kms.hpp"

namespace drbc {

// Q -> L for a quadratic field L.
class ExtensionContext {
public:
    explicit ExtensionContext(const NumberField& L) : Q_(NumberField::rational()), L_(L) {
        if (L.is_rational()) throw std::invalid_argument("extension field must be quadratic");
    }

    const NumberField& base() const { return Q_; }
    const NumberField& top() const { return L_; }
    int degree() const { return L_.degree(); }

    IntegralIdeal extend(const IntegralIdeal& a) const { return principal(L_, a.a); }

    // product of p^{f(P|p) v_P(b)}, which is (N(b))
    IntegralIdeal norm(const IntegralIdeal& b) const {
        Int n = 1;
        for (auto& pp : factor_ideal(L_, b)) {
            auto [e, f] = splitting_data(L_, pp.prime);
            (void)e;
            n = mul(n, ipow(pp.prime.a, f * pp.exponent));
        }
        return {n, 0, 1};
    }

    // (e, f) for each prime of L above p
    std::vector<std::pair<IntegralIdeal, std::pair<int, int>>> splitting(Int p) const {
        std::vector<std::pair<IntegralIdeal, std::pair<int, int>>> out;
        for (auto& P : primes_above(L_, p)) out.emplace_back(P, splitting_data(L_, P));
        return out;
    }

    int valuation(const IntegralIdeal& P, IntegralIdeal D) const {
        int k = 0;
        while (divides(L_, P, D)) {
            D = ideal_div(L_, D, P);
            ++k;
        }
        return k;
    }

    // D -> prod over p | f of p^{max j : P^{j e(P|p)} | D for all P | p}
    IntegralIdeal omega(const IntegralIdeal& f, const IntegralIdeal& D) const {
        Int n = 1;
        for (auto& [p, k] : factor_int(f.a)) {
            (void)k;
            int j = std::numeric_limits<int>::max();
            for (auto& [P, ef] : splitting(p)) j = std::min(j, valuation(P, D) / ef.first);
            n = mul(n, ipow(p, j));
        }
        return {n, 0, 1};
    }

private:
    NumberField Q_;
    NumberField L_;
};

// Left multipliers e U_s of the crossed product of L.
struct LeftElement {
    LevelFunction e;
    IntegralIdeal s;
};

// Raw term U_t (x) x, t an ideal of L and x a monomial over Q.
struct BimoduleTerm {
    IntegralIdeal t;
    Monomial x;
};

using BimoduleVector = std::vector<BimoduleTerm>;
// Normal form: primitive t -> element of the crossed product over Q.
using BimoduleNormal = std::map<IntegralIdeal, AlgebraElement>;

class Functoriality {
public:
    Functoriality(const ExtensionContext& ctx, const Endomotive& EQ, const Endomotive& EL)
        : ctx_(ctx), EQ_(EQ), EL_(EL), LQ_(EQ.levels()), LL_(EL.levels()), AQ_(LQ_.arith()), AL_(LL_.arith()), Q_(ctx.base()), L_(ctx.top()) {}

    // ---- monoid maps ---------------------------------------------------------

    MonoidMap dr_ver_map(const IntegralIdeal& f) const {
        const auto& D = LQ_.dr(f);
        const auto& DL = LL_.dr(ctx_.extend(f));
        MonoidMap m{f, ctx_.extend(f), "ver", {}};
        for (auto& e : D.elems) m.map.push_back(LL_.classify(DL, ctx_.extend(e.rep)));
        return m;
    }

    MonoidMap dr_norm_map(const IntegralIdeal& f) const {
        const auto& D = LQ_.dr(f);
        const auto& DL = LL_.dr(ctx_.extend(f));
        MonoidMap m{ctx_.extend(f), f, "norm", {}};
        for (auto& e : DL.elems) m.map.push_back(LQ_.classify(D, ctx_.norm(e.rep)));
        return m;
    }

    // b (1 + z) for small z in F with 1 + z totally positive
    std::vector<IntegralIdeal> equivalent_reps(const NumberField& K, const IntegralIdeal& b, const IntegralIdeal& F, int span = 2) const {
        std::vector<IntegralIdeal> out;
        auto B = basis(K, F);
        for (int i = -span; i <= span; ++i)
            for (int j = -span; j <= span; ++j) {
                if (B.size() == 1 && j != 0) continue;
                Elem z = escale(B[0], i);
                if (B.size() > 1) z = eadd(z, escale(B[1], j));
                Elem u = eadd(Elem{1, 0}, z);
                if (u.is_zero() || !totally_positive(K, u)) continue;
                out.push_back(ideal_mul(K, b, principal(K, u)));
            }
        return out;
    }

    Report map_checks(const IntegralIdeal& f) const {
        Report rep;
        const std::string where = L_.tag() + " f=" + to_string(f);
        const IntegralIdeal fL = ctx_.extend(f);
        const auto& D = LQ_.dr(f);
        const auto& DL = LL_.dr(fL);
        auto ver = dr_ver_map(f), nrm = dr_norm_map(f);

        bool ver_wd = true, nrm_wd = true;
        json vw, nw;
        for (Int x = 0; x < D.size(); ++x) {
            auto reps = equivalent_reps(Q_, D.elems[x].rep, f);
            for (auto& r : D.elems[x].alt_reps) reps.push_back(r);
            for (auto& r : reps)
                if (LL_.classify(DL, ctx_.extend(r)) != ver.map[x] && ver_wd) {
                    ver_wd = false;
                    vw = json{{"element", x}, {"rep", ideal_json(r)}};
                }
        }
        for (Int y = 0; y < DL.size(); ++y) {
            auto reps = equivalent_reps(L_, DL.elems[y].rep, fL);
            for (auto& r : DL.elems[y].alt_reps) reps.push_back(r);
            for (auto& r : reps)
                if (LQ_.classify(D, ctx_.norm(r)) != nrm.map[y] && nrm_wd) {
                    nrm_wd = false;
                    nw = json{{"element", y}, {"rep", ideal_json(r)}};
                }
        }
        rep.check("functor.ver_well_defined/" + where, "extension of ideals is well defined on DR classes", ver_wd, vw);
        rep.check("functor.norm_well_defined/" + where, "norm of ideals is well defined on DR classes", nrm_wd, nw);
        rep.check("functor.ver_multiplicative/" + where, "extension map DR_{Q,f} -> DR_{L,f^L} is a monoid homomorphism",
                  LevelSystem::is_homomorphism(D, DL, ver.map));
        rep.check("functor.norm_multiplicative/" + where, "norm map DR_{L,f^L} -> DR_{Q,f} is a monoid homomorphism",
                  LevelSystem::is_homomorphism(DL, D, nrm.map));
        bool inj = is_injective(ver.map);
        rep.add("functor.ver_injective/" + where, "the extension map is injective", inj ? Status::Pass : Status::Deviation,
                inj ? json(nullptr) : json{{"map", ver.map}});
        rep.add("functor.norm_image/" + where, "image size of the norm map (neither injective nor surjective in general)", Status::Info,
                json{{"injective", is_injective(nrm.map)}, {"surjective", is_surjective(nrm.map, D.size())}});

        // ver then norm squares
        bool sq = true;
        for (Int x = 0; x < D.size(); ++x)
            if (nrm.map[ver.map[x]] != D.mul(x, x)) sq = false;
        rep.check("functor.norm_of_extension/" + where, "norm after extension is squaring on DR_{Q,f}", sq);

        // norm(b n^L) = norm(b) n^2 for n coprime to f
        bool chase = true;
        json cw;
        for (Int n = 1; n <= 12; ++n) {
            IntegralIdeal nq{n, 0, 1};
            if (!coprime(Q_, nq, f)) continue;
            Int nL = LL_.classify(DL, ctx_.extend(nq));
            Int n2 = LQ_.classify(D, {n * n, 0, 1});
            for (Int y = 0; y < DL.size(); ++y)
                if (nrm.map[DL.mul(nL, y)] != D.mul(n2, nrm.map[y]) && chase) {
                    chase = false;
                    cw = json{{"n", n}, {"element", y}};
                }
        }
        rep.check("functor.norm_diagram/" + where, "norm intertwines multiplication by n^L with multiplication by N(n^L) = n^2", chase, cw);

        // Psi compatibility on both sides
        const auto& YQ = LQ_.y(f);
        const auto& YL = LL_.y(fL);
        const auto& GQ = AQ_.ray_class_group(f);
        const auto& GL = AL_.ray_class_group(fL);
        ResidueRing RQ(Q_, f, false), RL(L_, fL, false);
        auto psiQ = LQ_.psi(f).map, psiL = LL_.psi(fL).map;
        bool vpsi = true, npsi = true;
        for (Int o = 0; o < YQ.size(); ++o) {
            auto [rho, alpha] = YQ.orbits[o].front();
            Int r = RL.index(RQ.elem(rho));
            Int a = AL_.ray_class(GL, ctx_.extend(GQ.reps[alpha]));
            if (psiL[YL.orbit(r, a)] != ver.map[psiQ[o]]) vpsi = false;
        }
        for (Int o = 0; o < YL.size(); ++o) {
            auto [rho, beta] = YL.orbits[o].front();
            Int r = RQ.index(Elem{enorm(L_, RL.elem(rho)), 0});
            Int b = AQ_.ray_class(GQ, ctx_.norm(GL.reps[beta]));
            if (psiQ[YQ.orbit(r, b)] != nrm.map[psiL[o]]) npsi = false;
        }
        rep.check("functor.ver_psi/" + where, "Psi intertwines [rho, alpha] -> [i(rho), Ver(alpha)] with the extension map", vpsi);
        rep.check("functor.norm_psi/" + where, "Psi intertwines [rho, beta] -> [N(rho), Res(beta)] with the norm map", npsi);
        return rep;
    }

    // norm maps at f and f' commute with the projections
    Report norm_transition(const IntegralIdeal& f, const IntegralIdeal& fp) const {
        Report rep;
        auto n = dr_norm_map(f).map, np = dr_norm_map(fp).map;
        auto pq = EQ_.project_map(f, fp);
        auto pl = EL_.project_map(ctx_.extend(f), ctx_.extend(fp));
        bool ok = true;
        for (std::size_t y = 0; y < np.size(); ++y)
            if (pq[np[y]] != n[pl[y]]) ok = false;
        rep.check("functor.norm_transition/" + L_.tag() + " " + to_string(f) + "|" + to_string(fp), "norm maps commute with the transition maps", ok);
        return rep;
    }

    // ---- omega -------------------------------------------------------------------

    std::map<IntegralIdeal, IntegralIdeal> omega_map(const IntegralIdeal& f) const {
        std::map<IntegralIdeal, IntegralIdeal> m;
        for (auto& D : divisors(L_, ctx_.extend(f))) m[D] = ctx_.omega(f, D);
        return m;
    }

    Report omega_checks(const IntegralIdeal& f) const {
        Report rep;
        const std::string where = L_.tag() + " f=" + to_string(f);
        auto om = omega_map(f);
        auto divs = divisors(Q_, f);
        std::set<IntegralIdeal> img;
        for (auto& [D, d] : om) img.insert(d);
        rep.check("functor.omega_surjective/" + where, "omega maps the divisors of f^L onto the divisors of f",
                  img == std::set<IntegralIdeal>(divs.begin(), divs.end()), json{{"image", img.size()}, {"divisors", divs.size()}});
        bool mono = true;
        for (auto& [D, d] : om)
            for (auto& [E, e] : om)
                if (divides(L_, D, E) && !divides(Q_, d, e)) mono = false;
        rep.check("functor.omega_monotone/" + where, "omega preserves divisibility", mono);
        bool sect = true;
        for (auto& d : divs)
            if (!(om.at(ctx_.extend(d)) == d)) sect = false;
        rep.check("functor.omega_section/" + where, "omega(d^L) = d for every d | f", sect);
        bool below = true;
        for (auto& [D, d] : om)
            if (!divides(L_, ctx_.extend(d), D)) below = false;
        rep.check("functor.omega_maximal/" + where, "omega(D)^L divides D", below);
        return rep;
    }

    json omega_json(const IntegralIdeal& f) const {
        json t = json::array();
        for (auto& [D, d] : omega_map(f)) t.push_back(json{{"divisor", ideal_json(D)}, {"omega", d.a}});
        return t;
    }

    // ---- components ----------------------------------------------------------------

    // The norm induces C_{L,D} -> C_{Q,omega(D)} for D | f^L, compatibly with f | f'.
    Report component_restriction_check(const IntegralIdeal& f, const IntegralIdeal& fp) const {
        Report rep;
        const std::string where = L_.tag() + " " + to_string(f) + "|" + to_string(fp);
        bool hom = true, wd = true, trans_div = true, trans_cls = true;
        json hw, ww, tw;
        json surj = json::array();
        for (auto& D : divisors(L_, ctx_.extend(fp))) {
            IntegralIdeal w = ctx_.omega(fp, D);
            const auto& GL = AL_.ray_class_group(D);
            const auto& GQ = AQ_.ray_class_group(w);
            std::vector<Int> m;
            for (auto& b : GL.reps) m.push_back(AQ_.ray_class(GQ, ctx_.norm(b)));
            for (Int x = 0; x < GL.order(); ++x)
                for (Int y = 0; y < GL.order(); ++y)
                    if (m[GL.group.op(x, y)] != GQ.group.op(m[x], m[y]) && hom) {
                        hom = false;
                        hw = json{{"divisor", ideal_json(D)}, {"x", x}, {"y", y}};
                    }
            for (Int x = 0; x < GL.order(); ++x)
                for (auto& r : equivalent_reps(L_, GL.reps[x], D))
                    if (AQ_.ray_class(GQ, ctx_.norm(r)) != m[x] && wd) {
                        wd = false;
                        ww = json{{"divisor", ideal_json(D)}, {"class", x}, {"rep", ideal_json(r)}};
                    }
            std::set<Int> image(m.begin(), m.end());
            surj.push_back(json{{"divisor", ideal_json(D)}, {"omega", w.a}, {"image", image.size()}, {"target", GQ.order()}});

            // transition to level f
            IntegralIdeal Dg = ideal_gcd(L_, D, ctx_.extend(f));
            IntegralIdeal wg = ctx_.omega(f, Dg);
            if (!(wg == ideal_gcd(Q_, w, f))) {
                trans_div = false;
                tw = json{{"divisor", ideal_json(D)}};
            }
            const auto& GLg = AL_.ray_class_group(Dg);
            const auto& GQg = AQ_.ray_class_group(wg);
            for (Int x = 0; x < GL.order(); ++x) {
                Int p1 = AQ_.ray_class(GQg, GQ.reps[m[x]]);
                Int c2 = AL_.ray_class(GLg, GL.reps[x]);
                Int p2 = AQ_.ray_class(GQg, ctx_.norm(GLg.reps[c2]));
                if (p1 != p2 && trans_cls) {
                    trans_cls = false;
                    tw = json{{"divisor", ideal_json(D)}, {"class", x}};
                }
            }
        }
        rep.check("functor.component_homomorphism/" + where, "the norm induces a homomorphism C_{L,D} -> C_{Q,omega(D)}", hom, hw);
        rep.check("functor.component_well_defined/" + where, "the component map does not depend on representatives", wd, ww);
        rep.check("functor.component_transition/" + where, "component maps are compatible with the transition f | f'", trans_div && trans_cls, tw);
        rep.add("functor.component_surjectivity/" + where, "image of each component map", Status::Info, json{{"components", surj}});
        return rep;
    }

    // ---- bimodule ------------------------------------------------------------------

    IntegralIdeal q_ideal(Int n) const { return {n, 0, 1}; }

    // phi(c) = c o ver, at the Q-level of the least positive integer in the level of c
    LevelFunction phi(const LevelFunction& c) const {
        IntegralIdeal n = q_ideal(c.level.a);
        const auto& D = LQ_.dr(n);
        const auto& DL = LL_.dr(c.level);
        LevelFunction out{n, {}};
        for (auto& e : D.elems) out.v.push_back(c.v[LL_.classify(DL, ctx_.extend(e.rep))]);
        return out;
    }

    BimoduleNormal normalize(const BimoduleVector& v) const {
        BimoduleNormal out;
        for (auto& [t, x] : v) {
            Int n = content(L_, t);
            IntegralIdeal t0 = ideal_div(L_, t, principal(L_, n));
            EQ_.accumulate(out[t0], EQ_.product(EQ_.U(q_ideal(n)), x));
        }
        for (auto it = out.begin(); it != out.end();)
            it = it->second.empty() ? out.erase(it) : std::next(it);
        return out;
    }

    bool nequal(const BimoduleNormal& a, const BimoduleNormal& b) const {
        if (a.size() != b.size()) return false;
        for (auto& [t, x] : a) {
            auto it = b.find(t);
            if (it == b.end() || !EQ_.eequal(x, it->second)) return false;
        }
        return true;
    }

    // e U_s . (U_t (x) x) = U_{st} (x) phi(e~) x with e U_{st} = U_{st} e~
    BimoduleVector left(const LeftElement& a, const BimoduleVector& v) const {
        BimoduleVector out;
        for (auto& [t, x] : v) {
            IntegralIdeal st = ideal_mul(L_, a.s, t);
            LevelFunction et = EL_.sigma_fn(a.e, st);
            out.push_back({st, EQ_.product(EQ_.coeff(phi(et)), x)});
        }
        return out;
    }

    LeftElement lproduct(const LeftElement& a, const LeftElement& b) const {
        return {EL_.fmul(a.e, EL_.rho_fn(b.e, a.s)), ideal_mul(L_, a.s, b.s)};
    }

    BimoduleVector right(const BimoduleVector& v, const Monomial& a) const {
        BimoduleVector out;
        for (auto& [t, x] : v) out.push_back({t, EQ_.product(x, a)});
        return out;
    }

    // E(U*_t U_t'): U*_n U_n' when t'/t = n'/n is extended from Q, else zero.
    std::optional<Monomial> expectation(const IntegralIdeal& t, const IntegralIdeal& tp) const {
        IntegralIdeal g = ideal_gcd(L_, t, tp);
        IntegralIdeal u = ideal_div(L_, t, g), up = ideal_div(L_, tp, g);
        Int n = content(L_, u), np = content(L_, up);
        if (!(u == principal(L_, n)) || !(up == principal(L_, np))) return std::nullopt;
        return Monomial{q_ideal(n), q_ideal(np), EQ_.one()};
    }

    AlgebraElement inner(const BimoduleVector& a, const BimoduleVector& b) const {
        AlgebraElement out;
        for (auto& [t, x] : a)
            for (auto& [tp, y] : b)
                if (auto e = expectation(t, tp)) EQ_.accumulate(out, EQ_.product(EQ_.product(EQ_.adjoint(x), *e), y));
        return out;
    }

    // ideals of L with N <= B and no rational factor
    std::vector<IntegralIdeal> primitive_ideals(Int B) const {
        std::vector<IntegralIdeal> out;
        for (auto& t : AL_.ideals(B))
            if (content(L_, t) == 1) out.push_back(t);
        return out;
    }

    Report bimodule_checks(Int B, std::uint64_t seed, int samples = 12) const {
        Report rep;
        const std::string where = L_.tag() + " B=" + std::to_string(B);
        std::mt19937_64 rng(seed);
        auto tids = AL_.ideals(B);
        auto prim = primitive_ideals(B);
        auto qids = AQ_.ideals(3);
        std::vector<IntegralIdeal> qlevels{q_ideal(1), q_ideal(2)};
        std::vector<IntegralIdeal> llevels{unit_ideal()};
        for (auto& P : primes_above(L_, 2)) llevels.push_back(P);

        auto rmono = [&]() {
            return Monomial{qids[rng() % qids.size()], qids[rng() % qids.size()], EQ_.random_function(qlevels[rng() % qlevels.size()], rng)};
        };
        auto rvec = [&]() {
            BimoduleVector v;
            int k = 1 + static_cast<int>(rng() % 2);
            for (int i = 0; i < k; ++i) v.push_back({tids[rng() % tids.size()], rmono()});
            return v;
        };
        auto rleft = [&]() {
            auto small = AL_.ideals(4);
            return LeftElement{EL_.random_function(llevels[rng() % llevels.size()], rng), small[rng() % small.size()]};
        };

        // orthonormality of U_t (x) 1 over primitive t
        bool ortho = true;
        json ow;
        for (auto& t : prim)
            for (auto& tp : prim) {
                auto ip = inner({{t, EQ_.U(unit_ideal())}}, {{tp, EQ_.U(unit_ideal())}});
                AlgebraElement want;
                if (t == tp) want = EQ_.element(EQ_.coeff(EQ_.one()));
                if (!EQ_.eequal(ip, want) && ortho) {
                    ortho = false;
                    ow = json{{"t", ideal_json(t)}, {"t_prime", ideal_json(tp)}};
                }
            }
        rep.check("functor.bimodule_orthonormal/" + where, "<U_t (x) 1, U_t' (x) 1> = delta_{t,t'} for primitive t", ortho, ow);

        bool bal = true, bal_ip = true, bal_left = true, assoc = true, sym = true, rlin = true, adj = true, pos = true;
        json bw;
        for (int k = 0; k < samples; ++k) {
            auto t = tids[rng() % tids.size()];
            Int n = 1 + static_cast<Int>(rng() % 3);
            auto x = rmono();
            BimoduleVector lhs{{ideal_mul(L_, t, principal(L_, n)), x}};
            BimoduleVector rhs{{t, EQ_.product(EQ_.U(q_ideal(n)), x)}};
            if (!nequal(normalize(lhs), normalize(rhs))) {
                bal = false;
                bw = json{{"t", ideal_json(t)}, {"n", n}};
            }
            auto eta = rvec();
            if (!EQ_.eequal(inner(lhs, eta), inner(rhs, eta))) bal_ip = false;
            auto a = rleft(), b = rleft();
            if (!nequal(normalize(left(a, lhs)), normalize(left(a, rhs)))) bal_left = false;

            auto xi = rvec();
            if (!nequal(normalize(left(a, left(b, xi))), normalize(left(lproduct(a, b), xi)))) assoc = false;
            if (!EQ_.eequal(EQ_.eadjoint(inner(xi, eta)), inner(eta, xi))) sym = false;
            auto m = rmono();
            if (!EQ_.eequal(inner(xi, right(eta, m)), EQ_.eproduct(inner(xi, eta), EQ_.element(m)))) rlin = false;
            if (!EQ_.eequal(inner(right(xi, m), eta), EQ_.eproduct(EQ_.element(EQ_.adjoint(m)), inner(xi, eta)))) adj = false;

            // <b, b> for a basis vector is sigma(c^2 pi) on the diagonal: nonnegative and nonzero
            BimoduleVector basis_vec{{prim[rng() % prim.size()], x}};
            auto d = inner(basis_vec, basis_vec);
            bool nonzero_x = !EQ_.element(x).empty();
            bool ok = !nonzero_x || !d.empty();
            for (auto& [key, c] : d) {
                if (!key.first.is_one() || !key.second.is_one()) ok = false;
                for (auto& v : c.v)
                    if (v < 0) ok = false;
            }
            if (!ok) pos = false;
        }
        rep.check("functor.bimodule_balancing/" + where, "(t n^L) (x) x = t (x) U_n x in normal form", bal, bw);
        rep.check("functor.bimodule_balancing_inner/" + where, "the inner product respects the balancing relation", bal_ip);
        rep.check("functor.bimodule_balancing_left/" + where, "the left action respects the balancing relation", bal_left);
        rep.check("functor.bimodule_left_action/" + where, "(ab) . xi = a . (b . xi) for left multipliers e U_s", assoc);
        rep.check("functor.bimodule_symmetric/" + where, "<xi, eta>* = <eta, xi>", sym);
        rep.check("functor.bimodule_right_linear/" + where, "<xi, eta a> = <xi, eta> a", rlin);
        rep.check("functor.bimodule_adjoint/" + where, "<xi a, eta> = a* <xi, eta>", adj);
        rep.check("functor.bimodule_positive/" + where, "<b, b> is a nonzero positive diagonal element for basis vectors", pos);
        rep.add("functor.bimodule_size/" + where, "truncated basis data", Status::Info,
                json{{"ideals", tids.size()}, {"primitive_ideals", prim.size()}, {"base_monomial_generators", qids.size()}});
        return rep;
    }

private:
    const ExtensionContext& ctx_;
    const Endomotive& EQ_;
    const Endomotive& EL_;
    const LevelSystem& LQ_;
    const LevelSystem& LL_;
    const Arithmetic& AQ_;
    const Arithmetic& AL_;
    NumberField Q_;
    NumberField L_;
};

}  // namespace drbc
