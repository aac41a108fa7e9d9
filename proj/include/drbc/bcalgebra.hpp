#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "drmonoid.hpp"
#include "linalg.hpp"

namespace drbc {

// 0/1 matrix with at most one nonzero per row: col[i] is that column or -1.
struct IndexMatrix {
    Int rows = 0;
    Int cols = 0;
    std::vector<Int> col;

    Matrix<Int> dense() const {
        auto M = zeros<Int>(rows, cols);
        for (Int i = 0; i < rows; ++i)
            if (col[i] >= 0) M[i][col[i]] = 1;
        return M;
    }
    bool operator==(const IndexMatrix&) const = default;
};

// A * B
inline IndexMatrix compose(const IndexMatrix& A, const IndexMatrix& B) {
    if (A.cols != B.rows) throw std::invalid_argument("compose: shape mismatch");
    IndexMatrix C{A.rows, B.cols, std::vector<Int>(A.rows, -1)};
    for (Int i = 0; i < A.rows; ++i)
        if (A.col[i] >= 0) C.col[i] = B.col[A.col[i]];
    return C;
}

inline IndexMatrix identity_index(Int n) {
    IndexMatrix I{n, n, std::vector<Int>(n)};
    std::iota(I.col.begin(), I.col.end(), Int{0});
    return I;
}

inline IndexMatrix diag_index(const std::vector<Int>& indicator) {
    const Int n = static_cast<Int>(indicator.size());
    IndexMatrix D{n, n, std::vector<Int>(n, -1)};
    for (Int i = 0; i < n; ++i)
        if (indicator[i]) D.col[i] = i;
    return D;
}

// Function on DR_level with rational values.
struct LevelFunction {
    IntegralIdeal level;
    std::vector<Rational> v;
};

// U*_{s1} c U_{s2}
struct Monomial {
    IntegralIdeal s1;
    IntegralIdeal s2;
    LevelFunction c;
};

// Sum of canonical monomials keyed by (s1, s2).
using AlgebraElement = std::map<std::pair<IntegralIdeal, IntegralIdeal>, LevelFunction>;

// Equivariant functions DR_f -> Fun(C_f, Q), C_f acting on the target by
// translation of the idempotent basis. Basis element (orbit, coset c):
// h(gamma x0) = indicator of gamma c S, S = stabilizer of x0.
struct EquivariantModule {
    IntegralIdeal level;
    Int group_order = 0;
    Int points = 0;
    std::vector<std::vector<Int>> act;  // act[g][x] = g . x
    std::vector<Int> orbit_of;
    std::vector<Int> base;                    // per orbit
    std::vector<std::vector<Int>> stabilizer;  // per orbit
    std::vector<Int> gamma_of;                // gamma_of[x] . base = x
    std::vector<std::pair<Int, Int>> basis;   // (orbit, coset representative)

    // h_b(x) as a 0/1 vector over C_f
    std::vector<Int> value(const FiniteAbelianGroup& G, std::size_t b, Int x) const {
        std::vector<Int> out(group_order, 0);
        auto [o, c] = basis[b];
        if (orbit_of[x] != o) return out;
        Int gc = G.op(gamma_of[x], c);
        for (Int s : stabilizer[o]) out[G.op(gc, s)] = 1;
        return out;
    }
};

class Endomotive {
public:
    explicit Endomotive(const LevelSystem& L) : L_(L), A_(L.arith()), K_(L.field()) {}

    const LevelSystem& levels() const { return L_; }
    const NumberField& field() const { return K_; }

    // ---- cached structural maps ------------------------------------------------

    const std::vector<Int>& embed_map(const IntegralIdeal& f, const IntegralIdeal& d) const {
        auto key = std::make_pair(f, d);
        auto it = embed_.find(key);
        if (it != embed_.end()) return it->second;
        return embed_.emplace(key, L_.mult_embed(f, d).map).first->second;
    }

    const std::vector<Int>& project_map(const IntegralIdeal& f, const IntegralIdeal& fp) const {
        auto key = std::make_pair(f, fp);
        auto it = project_.find(key);
        if (it != project_.end()) return it->second;
        return project_.emplace(key, L_.project(f, fp).map).first->second;
    }

    // ---- operators ---------------------------------------------------------------

    // Fun(DR_{fd}) -> Fun(DR_f), h -> h o lambda_d
    IndexMatrix sigma_op(const IntegralIdeal& f, const IntegralIdeal& d) const {
        const auto& lam = embed_map(f, d);
        IntegralIdeal fd = ideal_mul(K_, f, d);
        return {L_.dr(f).size(), L_.dr(fd).size(), lam};
    }

    // Fun(DR_f) -> Fun(DR_{fd}), extension by zero off the image of lambda_d
    IndexMatrix rho_op(const IntegralIdeal& f, const IntegralIdeal& d) const {
        const auto& lam = embed_map(f, d);
        IntegralIdeal fd = ideal_mul(K_, f, d);
        IndexMatrix R{L_.dr(fd).size(), L_.dr(f).size(), std::vector<Int>(L_.dr(fd).size(), -1)};
        for (Int x = 0; x < static_cast<Int>(lam.size()); ++x) R.col[lam[x]] = x;
        return R;
    }

    // Fun(DR_f) -> Fun(DR_{f'}), h -> h o pi_{f,f'}
    IndexMatrix xi_op(const IntegralIdeal& f, const IntegralIdeal& fp) const {
        const auto& pr = project_map(f, fp);
        return {L_.dr(fp).size(), L_.dr(f).size(), pr};
    }

    // Fun(DR_f) -> Fun(DR_f), h -> h([d] .)
    IndexMatrix sigma_same(const IntegralIdeal& f, const IntegralIdeal& d) const {
        const auto& D = L_.dr(f);
        Int dc = L_.classify(D, d);
        IndexMatrix S{D.size(), D.size(), std::vector<Int>(D.size())};
        for (Int x = 0; x < D.size(); ++x) S.col[x] = D.mul(dc, x);
        return S;
    }

    // Indicator of {x in DR_g : d divides the divisor of x}; d | g.
    std::vector<Int> pi_indicator(const IntegralIdeal& g, const IntegralIdeal& d) const {
        const auto& D = L_.dr(g);
        std::vector<Int> out;
        for (auto& e : D.elems) out.push_back(divides(K_, d, e.divisor) ? 1 : 0);
        return out;
    }

    // ---- relation suite ----------------------------------------------------------

    Report relation_suite(const IntegralIdeal& f, const IntegralIdeal& d, const IntegralIdeal& e) const {
        Report rep;
        const std::string where = K_.tag() + " f=" + to_string(f) + " d=" + to_string(d) + " e=" + to_string(e);
        auto fd = ideal_mul(K_, f, d), fe = ideal_mul(K_, f, e), de = ideal_mul(K_, d, e);
        auto fde = ideal_mul(K_, fd, e);
        const Int nf = L_.dr(f).size();

        // rho_d(1) = pi_d
        {
            auto R = rho_op(f, d);
            auto pi = pi_indicator(fd, d);
            std::vector<Int> img(R.rows);
            for (Int y = 0; y < R.rows; ++y) img[y] = R.col[y] >= 0 ? 1 : 0;
            rep.check("bcalgebra.rho_one/" + where, "rho_d(1) = pi_d", img == pi);
        }
        // pi_d pi_e = pi_lcm, all at level f d e
        {
            auto l = ideal_lcm(K_, d, e);
            auto image = [&](const IntegralIdeal& x) {
                auto R = rho_op(ideal_div(K_, fde, x), x);
                std::vector<Int> v(R.rows);
                for (Int y = 0; y < R.rows; ++y) v[y] = R.col[y] >= 0 ? 1 : 0;
                return v;
            };
            auto pd = image(d), pe = image(e), pl = image(l);
            std::vector<Int> prod(pd.size());
            for (std::size_t i = 0; i < pd.size(); ++i) prod[i] = pd[i] * pe[i];
            rep.check("bcalgebra.pi_lcm/" + where, "pi_d pi_e = pi_lcm(d,e)", prod == pl);
        }
        // sigma_d sigma_e = sigma_de, both orders
        {
            bool ok = compose(sigma_op(f, e), sigma_op(fe, d)) == sigma_op(f, de) &&
                      compose(sigma_op(f, d), sigma_op(fd, e)) == sigma_op(f, de);
            rep.check("bcalgebra.sigma_compose/" + where, "sigma_d sigma_e = sigma_de", ok);
        }
        // rho_d rho_e = rho_de
        {
            bool ok = compose(rho_op(fe, d), rho_op(f, e)) == rho_op(f, de) && compose(rho_op(fd, e), rho_op(f, d)) == rho_op(f, de);
            rep.check("bcalgebra.rho_compose/" + where, "rho_d rho_e = rho_de", ok);
        }
        // rho_d sigma_d = pi_d and sigma_d rho_d = id
        for (auto& x : {d, e}) {
            auto fx = ideal_mul(K_, f, x);
            bool a = compose(rho_op(f, x), sigma_op(f, x)) == diag_index(pi_indicator(fx, x));
            bool b = compose(sigma_op(f, x), rho_op(f, x)) == identity_index(nf);
            rep.check("bcalgebra.rho_sigma/" + where + " x=" + to_string(x), "rho_d sigma_d = multiplication by pi_d", a);
            rep.check("bcalgebra.sigma_rho/" + where + " x=" + to_string(x), "sigma_d rho_d = id", b);
        }
        return rep;
    }

    Report transition_compat(const IntegralIdeal& f, const IntegralIdeal& fp, const IntegralIdeal& d) const {
        Report rep;
        const std::string where = K_.tag() + " " + to_string(f) + "|" + to_string(fp) + " d=" + to_string(d);
        auto fd = ideal_mul(K_, f, d), fpd = ideal_mul(K_, fp, d);
        bool cross = compose(xi_op(f, fp), sigma_op(f, d)) == compose(sigma_op(fp, d), xi_op(fd, fpd));
        bool same = compose(xi_op(f, fp), sigma_same(f, d)) == compose(sigma_same(fp, d), xi_op(f, fp));
        bool rho = compose(xi_op(fd, fpd), rho_op(f, d)) == compose(rho_op(fp, d), xi_op(f, fp));
        rep.check("bcalgebra.transition_sigma/" + where, "xi_{f,f'} sigma_d = sigma_d xi_{fd,f'd}", cross);
        rep.check("bcalgebra.transition_endo/" + where, "xi_{f,f'} commutes with the level-preserving sigma_d", same);
        rep.check("bcalgebra.transition_rho/" + where, "xi_{fd,f'd} rho_d = rho_d xi_{f,f'}", rho);
        return rep;
    }

    // Random words in sigma, rho, xi applied to random functions; the
    // relations are re-checked on every intermediate result.
    Report random_words(const IntegralIdeal& f, const std::vector<IntegralIdeal>& steps, std::uint64_t seed, int words,
                        Int max_level_norm = 400) const {
        Report rep;
        std::mt19937_64 rng(seed);
        bool ok = true;
        json wit;
        for (int w = 0; w < words && ok; ++w) {
            LevelFunction h = random_function(f, rng);
            std::vector<std::string> word;
            int len = 1 + static_cast<int>(rng() % 4);
            for (int k = 0; k < len && ok; ++k) {
                const auto& d = steps[rng() % steps.size()];
                int op = static_cast<int>(rng() % 3);
                IntegralIdeal hd = ideal_mul(K_, h.level, d);
                if (op == 1 && divides(K_, d, h.level) && !(ideal_div(K_, h.level, d) == h.level)) {
                    h = apply(sigma_op(ideal_div(K_, h.level, d), d), h, ideal_div(K_, h.level, d));
                    word.push_back("sigma" + to_string(d));
                } else if (hd.norm() <= max_level_norm) {
                    if (op == 0) {
                        h = apply(rho_op(h.level, d), h, hd);
                        word.push_back("rho" + to_string(d));
                    } else {
                        h = lift(h, hd);
                        word.push_back("xi" + to_string(d));
                    }
                }
                auto hl = ideal_mul(K_, h.level, d);
                if (hl.norm() > max_level_norm) continue;
                auto back = apply(sigma_op(h.level, d), apply(rho_op(h.level, d), h, hl), h.level);
                auto lifted = lift(h, hl);
                auto rs = apply(rho_op(h.level, d), apply(sigma_op(h.level, d), lifted, h.level), hl);
                auto pi = pi_indicator(hl, d);
                bool r1 = back.v == h.v;
                bool r2 = true;
                for (std::size_t i = 0; i < pi.size(); ++i)
                    if (rs.v[i] != (pi[i] ? lifted.v[i] : Rational(0))) r2 = false;
                if (!r1 || !r2) {
                    ok = false;
                    wit = json{{"word", word}, {"d", ideal_json(d)}};
                }
            }
        }
        rep.check("bcalgebra.random_words/" + K_.tag() + " f=" + to_string(f), "relations hold after random words in sigma, rho, xi", ok, wit);
        return rep;
    }

    // ---- Galois orbits ------------------------------------------------------------

    Report galois_orbit_structure(const IntegralIdeal& f) const {
        Report rep;
        const std::string where = K_.tag() + " f=" + to_string(f);
        const auto& D = L_.dr(f);
        const auto& G = A_.ray_class_group(f);
        std::vector<Int> uel(G.order());
        for (Int c = 0; c < G.order(); ++c) uel[c] = L_.unit_element(D, c);
        std::vector<Int> orbit(D.size(), -1);
        std::vector<std::vector<Int>> orbits;
        for (Int x = 0; x < D.size(); ++x) {
            if (orbit[x] >= 0) continue;
            std::vector<Int> o;
            for (Int u : D.units) {
                Int y = D.mul(u, x);
                if (orbit[y] < 0) {
                    orbit[y] = static_cast<Int>(orbits.size());
                    o.push_back(y);
                }
            }
            orbits.push_back(o);
        }
        auto divs = divisors(K_, f);
        std::set<IntegralIdeal> seen;
        bool bij = orbits.size() == divs.size(), sizes = true, stab_ok = true, homog = true;
        json table = json::array();
        for (auto& o : orbits) {
            IntegralIdeal d = D.elems[o.front()].divisor;
            for (Int y : o)
                if (!(D.elems[y].divisor == d)) homog = false;
            if (!seen.insert(d).second) bij = false;
            IntegralIdeal g = ideal_div(K_, f, d);
            const auto& Gs = A_.ray_class_group(g);
            if (static_cast<Int>(o.size()) != Gs.order()) sizes = false;
            // stabilizer of the base point versus the kernel of C_f -> C_{f/d}
            Int one = A_.ray_class(Gs, unit_ideal());
            std::vector<Int> stab, ker;
            for (Int c = 0; c < G.order(); ++c) {
                if (D.mul(uel[c], o.front()) == o.front()) stab.push_back(c);
                if (A_.ray_class(Gs, G.reps[c]) == one) ker.push_back(c);
            }
            if (stab != ker || static_cast<Int>(o.size() * stab.size()) != G.order()) stab_ok = false;
            table.push_back(json{{"divisor", ideal_json(d)}, {"orbit_size", o.size()}, {"ray_class_order", Gs.order()}, {"stabilizer", stab.size()}});
        }
        rep.check("bcalgebra.orbits_divisors/" + where, "Galois orbits of DR_f biject with the divisors of f", bij && homog, json{{"orbits", table}});
        rep.check("bcalgebra.orbit_sizes/" + where, "the d-orbit has |C_{f/d}| points", sizes, json{{"orbits", table}});
        rep.check("bcalgebra.orbit_torsor/" + where, "stabilizers are the kernels of C_f -> C_{f/d}, so each orbit is a C_{f/d}-torsor", stab_ok,
                  json{{"orbits", table}});
        return rep;
    }

    // ---- equivariant functions ----------------------------------------------------

    EquivariantModule equivariant_module(const IntegralIdeal& f) const {
        const auto& D = L_.dr(f);
        const auto& G = A_.ray_class_group(f);
        EquivariantModule M;
        M.level = f;
        M.group_order = G.order();
        M.points = D.size();
        M.act.assign(G.order(), std::vector<Int>(D.size()));
        for (Int g = 0; g < G.order(); ++g)
            for (Int x = 0; x < D.size(); ++x) M.act[g][x] = L_.galois_act(D, g, x);
        M.orbit_of.assign(D.size(), -1);
        M.gamma_of.assign(D.size(), -1);
        for (Int x = 0; x < D.size(); ++x) {
            if (M.orbit_of[x] >= 0) continue;
            Int o = static_cast<Int>(M.base.size());
            M.base.push_back(x);
            std::vector<Int> stab;
            for (Int g = 0; g < G.order(); ++g) {
                Int y = M.act[g][x];
                if (y == x) stab.push_back(g);
                if (M.orbit_of[y] < 0) {
                    M.orbit_of[y] = o;
                    M.gamma_of[y] = g;
                }
            }
            M.stabilizer.push_back(stab);
            std::vector<char> used(G.order(), 0);
            for (Int c = 0; c < G.order(); ++c) {
                if (used[c]) continue;
                for (Int s : stab) used[G.group.op(c, s)] = 1;
                M.basis.emplace_back(o, c);
            }
        }
        return M;
    }

    Report equivariant_checks(const IntegralIdeal& f) const {
        Report rep;
        const std::string where = K_.tag() + " f=" + to_string(f);
        const auto& G = A_.ray_class_group(f).group;
        auto M = equivariant_module(f);
        const Int n = M.points, g = M.group_order;
        const std::size_t nb = M.basis.size();

        // equivariance of every basis function
        bool eq = true;
        for (std::size_t b = 0; b < nb && eq; ++b)
            for (Int x = 0; x < n && eq; ++x) {
                if (M.orbit_of[x] != M.basis[b].first) continue;
                auto hx = M.value(G, b, x);
                for (Int gm = 0; gm < g; ++gm) {
                    auto hy = M.value(G, b, M.act[gm][x]);
                    for (Int k = 0; k < g; ++k)
                        if (hy[G.op(gm, k)] != hx[k]) eq = false;
                }
            }
        rep.check("bcalgebra.equivariance/" + where, "basis functions satisfy h(gamma x) = gamma h(x)", eq);

        // brute force: components of X x G under the diagonal action
        std::vector<Int> parent(n * g);
        std::iota(parent.begin(), parent.end(), Int{0});
        std::function<Int(Int)> find = [&](Int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); };
        for (Int gen : G.generators())
            for (Int x = 0; x < n; ++x)
                for (Int k = 0; k < g; ++k) {
                    Int a = find(x * g + k), b = find(M.act[gen][x] * g + G.op(gen, k));
                    if (a != b) parent[a] = b;
                }
        std::set<Int> roots;
        for (Int i = 0; i < n * g; ++i) roots.insert(find(i));
        Int brute = static_cast<Int>(roots.size());
        Int predicted = 0;
        for (auto& st : M.stabilizer) predicted += g / static_cast<Int>(st.size());
        Int spec_sum = mul(static_cast<Int>(M.base.size()), g);
        rep.check("bcalgebra.equivariant_dimension/" + where, "dimension of the equivariant module equals the orbit-decomposition count",
                  brute == static_cast<Int>(nb) && brute == predicted && brute == n,
                  json{{"brute_force", brute}, {"basis", nb}, {"sum_index_of_stabilizers", predicted}, {"dr_size", n}});
        rep.add("bcalgebra.equivariant_dimension_sum_cf/" + where, "sum over orbits of |C_f| compared with the dimension",
                Status::Info, json{{"sum_over_orbits_of_cf", spec_sum}, {"dimension", brute}});

        // basis spans the brute-force invariant space: rank per orbit block, Q and mod p
        bool span_q = true, span_p = true;
        for (std::size_t o = 0; o < M.base.size(); ++o) {
            std::vector<Int> pts;
            for (Int x = 0; x < n; ++x)
                if (M.orbit_of[x] == static_cast<Int>(o)) pts.push_back(x);
            Matrix<Int> B;
            for (std::size_t b = 0; b < nb; ++b) {
                if (M.basis[b].first != static_cast<Int>(o)) continue;
                std::vector<Int> row;
                for (Int x : pts) {
                    auto v = M.value(G, b, x);
                    row.insert(row.end(), v.begin(), v.end());
                }
                B.push_back(row);
            }
            const std::size_t want = B.size();
            // brute-force component indicators restricted to this orbit
            std::map<Int, std::vector<Int>> comp;
            for (std::size_t i = 0; i < pts.size(); ++i)
                for (Int k = 0; k < g; ++k) {
                    auto& r = comp[find(pts[i] * g + k)];
                    if (r.empty()) r.assign(pts.size() * g, 0);
                    r[i * g + k] = 1;
                }
            Matrix<Int> both = B;
            for (auto& [root, r] : comp) both.push_back(r);
            if (rank_modp(B) != want || rank_modp(both) != want || comp.size() != want) span_p = false;
            if (want * pts.size() * g <= 200000) {
                if (rank_rational(to_rational(B)) != want || rank_rational(to_rational(both)) != want) span_q = false;
            }
        }
        rep.check("bcalgebra.equivariant_span/" + where, "basis spans the brute-force equivariant space (rationals and mod p)", span_q && span_p,
                  json{{"rational", span_q}, {"mod_p", span_p}});

        // separation
        std::set<std::vector<Int>> sigs;
        for (Int x = 0; x < n; ++x) {
            std::vector<Int> sgn{M.orbit_of[x]};
            for (std::size_t b = 0; b < nb; ++b) {
                if (M.basis[b].first != M.orbit_of[x]) continue;
                auto v = M.value(G, b, x);
                sgn.insert(sgn.end(), v.begin(), v.end());
            }
            sigs.insert(sgn);
        }
        rep.check("bcalgebra.separation/" + where, "equivariant functions separate the points of DR_f", static_cast<Int>(sigs.size()) == n);

        // evaluation at a point hits exactly the stabilizer-fixed part of the target
        bool lgen = true;
        json lw;
        for (Int x = 0; x < n && lgen; ++x) {
            Int o = M.orbit_of[x];
            Matrix<Int> E;
            for (std::size_t b = 0; b < nb; ++b)
                if (M.basis[b].first == o) E.push_back(M.value(G, b, x));
            const auto& S = M.stabilizer[o];
            for (auto& row : E)
                for (Int k = 0; k < g; ++k)
                    for (Int s : S)
                        if (row[G.op(s, k)] != row[k]) lgen = false;
            Int want = g / static_cast<Int>(S.size());
            if (static_cast<Int>(rank_modp(E)) != want) lgen = false;
            if (!lgen) lw = json{{"point", x}};
        }
        rep.check("bcalgebra.evaluation_surjective/" + where, "evaluation at a point surjects onto the fixed part of its stabilizer", lgen, lw);

        // density: the target-algebra span is all of Fun(DR_f) tensor the target
        bool dq = true, dp = true;
        for (std::size_t o = 0; o < M.base.size(); ++o) {
            std::vector<Int> pts;
            for (Int x = 0; x < n; ++x)
                if (M.orbit_of[x] == static_cast<Int>(o)) pts.push_back(x);
            std::vector<std::size_t> bs;
            for (std::size_t b = 0; b < nb; ++b)
                if (M.basis[b].first == static_cast<Int>(o)) bs.push_back(b);
            std::vector<std::vector<std::vector<Int>>> vals(bs.size());
            for (std::size_t i = 0; i < bs.size(); ++i)
                for (Int x : pts) vals[i].push_back(M.value(G, bs[i], x));
            for (Int k = 0; k < g; ++k) {
                Matrix<Int> Mk(bs.size(), std::vector<Int>(pts.size()));
                for (std::size_t i = 0; i < bs.size(); ++i)
                    for (std::size_t j = 0; j < pts.size(); ++j) Mk[i][j] = vals[i][j][k];
                if (rank_modp(Mk) != pts.size()) dp = false;
                if (rank_rational(to_rational(Mk)) != pts.size()) dq = false;
            }
        }
        rep.check("bcalgebra.density/" + where, "target-algebra span of the equivariant functions is the full function space (exact rank)", dq && dp,
                  json{{"rational", dq}, {"mod_p", dp}});
        return rep;
    }

    // Point evaluations at unit points: h(nu w) = nu h(w).
    Report kms_infinity_evaluation(const IntegralIdeal& f) const {
        Report rep;
        const std::string where = K_.tag() + " f=" + to_string(f);
        const auto& D = L_.dr(f);
        const auto& G = A_.ray_class_group(f).group;
        auto M = equivariant_module(f);
        bool ok = true, torsor = true;
        json wit;
        for (Int w : D.units) {
            std::set<Int> hit;
            for (Int nu = 0; nu < M.group_order; ++nu) {
                Int y = M.act[nu][w];
                hit.insert(y);
                for (std::size_t b = 0; b < M.basis.size(); ++b) {
                    if (M.basis[b].first != M.orbit_of[w]) continue;
                    auto hw = M.value(G, b, w);
                    auto hy = M.value(G, b, y);
                    for (Int k = 0; k < M.group_order; ++k)
                        if (hy[G.op(nu, k)] != hw[k]) {
                            ok = false;
                            wit = json{{"point", w}, {"nu", nu}};
                        }
                }
            }
            std::set<Int> units(D.units.begin(), D.units.end());
            if (hit != units) torsor = false;
        }
        rep.check("bcalgebra.kms_infinity_equivariance/" + where, "evaluating the nu-translated state applies nu to the value", ok, wit);
        rep.check("bcalgebra.kms_infinity_torsor/" + where, "C_f permutes the unit points freely and transitively", torsor);
        return rep;
    }

    // (s star f)(s . y) = (gamma f)(y) on Y_{K,f} for every residue choice r of the idele.
    Report symmetry_compat(const IntegralIdeal& f, const IntegralIdeal& s) const {
        Report rep;
        const std::string where = K_.tag() + " f=" + to_string(f) + " s=" + to_string(s);
        if (!coprime(K_, s, f)) throw std::domain_error("symmetry_compat: s not coprime to f");
        const auto& Y = L_.y(f);
        const auto& G = A_.ray_class_group(f);
        ResidueRing R(K_, f);
        Int cs = A_.ray_class(G, s);
        bool ok = true;
        json wit;
        for (Int r : R.units()) {
            Int rinv = -1;
            for (Int u : R.units())
                if (R.mul_idx(r, u) == R.one()) rinv = u;
            Int gamma = G.group.op(cs, G.group.inverse(G.j.at(r)));
            for (Int o = 0; o < Y.size(); ++o) {
                auto [rho, alpha] = Y.orbits[o].front();
                // s . [rho, alpha] = [rho, [s]^{-1} alpha]; then undo the star action
                Int lhs = Y.orbit(R.mul_idx(rho, rinv), G.group.op(G.group.inverse(cs), alpha));
                Int rhs = Y.orbit(rho, G.group.op(G.group.inverse(gamma), alpha));
                if (lhs != rhs) {
                    ok = false;
                    wit = json{{"residue", r}, {"point", o}};
                }
            }
        }
        rep.check("bcalgebra.symmetry_compat/" + where, "star action after the ideal action equals the Galois action of gamma = [s]", ok, wit);
        return rep;
    }

    // Narrow class group trivial iff every ray class is j of a residue.
    Report star_automorphism_remark(const IntegralIdeal& f) const {
        Report rep;
        const auto& G = A_.ray_class_group(f);
        std::set<Int> jimg;
        for (auto& [r, c] : G.j) jimg.insert(c);
        bool all = true;
        for (Int c = 0; c < G.order(); ++c)
            if (!jimg.count(c)) all = false;
        bool narrow_trivial = A_.narrow_class_group().order() == 1;
        rep.check("bcalgebra.star_automorphism/" + K_.tag() + " f=" + to_string(f),
                  "every s admits a residue with gamma = 1 exactly when the narrow class group is trivial", all == narrow_trivial,
                  json{{"narrow_class_number", A_.narrow_class_group().order()}, {"all_classes_from_residues", all}});
        return rep;
    }

    // ---- level functions ----------------------------------------------------------

    LevelFunction one() const { return constant(unit_ideal(), 1); }

    LevelFunction constant(const IntegralIdeal& f, Int c) const { return {f, std::vector<Rational>(L_.dr(f).size(), Rational(c))}; }

    LevelFunction random_function(const IntegralIdeal& f, std::mt19937_64& rng, int lo = -2, int hi = 2) const {
        LevelFunction h{f, {}};
        for (Int i = 0; i < L_.dr(f).size(); ++i) h.v.push_back(Rational(lo + static_cast<int>(rng() % (hi - lo + 1))));
        return h;
    }

    LevelFunction apply(const IndexMatrix& M, const LevelFunction& h, const IntegralIdeal& target) const {
        LevelFunction out{target, std::vector<Rational>(M.rows, Rational(0))};
        for (Int i = 0; i < M.rows; ++i)
            if (M.col[i] >= 0) out.v[i] = h.v[M.col[i]];
        return out;
    }

    LevelFunction lift(const LevelFunction& h, const IntegralIdeal& g) const {
        if (h.level == g) return h;
        return apply(xi_op(h.level, g), h, g);
    }

    LevelFunction fmul(const LevelFunction& a, const LevelFunction& b) const {
        auto l = ideal_lcm(K_, a.level, b.level);
        auto x = lift(a, l), y = lift(b, l);
        for (std::size_t i = 0; i < x.v.size(); ++i) x.v[i] *= y.v[i];
        return x;
    }

    LevelFunction fadd(const LevelFunction& a, const LevelFunction& b) const {
        auto l = ideal_lcm(K_, a.level, b.level);
        auto x = lift(a, l), y = lift(b, l);
        for (std::size_t i = 0; i < x.v.size(); ++i) x.v[i] += y.v[i];
        return x;
    }

    bool fequal(const LevelFunction& a, const LevelFunction& b) const {
        auto l = ideal_lcm(K_, a.level, b.level);
        return lift(a, l).v == lift(b, l).v;
    }

    static bool is_zero(const LevelFunction& a) {
        for (auto& x : a.v)
            if (x != 0) return false;
        return true;
    }

    LevelFunction rho_fn(const LevelFunction& h, const IntegralIdeal& t) const {
        if (t.is_one()) return h;
        return apply(rho_op(h.level, t), h, ideal_mul(K_, h.level, t));
    }

    LevelFunction sigma_fn(const LevelFunction& h, const IntegralIdeal& s) const {
        if (s.is_one()) return h;
        return apply(sigma_same(h.level, s), h, h.level);
    }

    LevelFunction pi_fn(const IntegralIdeal& d) const {
        LevelFunction p{d, {}};
        for (Int x : pi_indicator(d, d)) p.v.push_back(Rational(x));
        return p;
    }

    // ---- crossed monomials ----------------------------------------------------------

    Monomial U(const IntegralIdeal& s) const { return {unit_ideal(), s, one()}; }
    Monomial Ustar(const IntegralIdeal& s) const { return {s, unit_ideal(), one()}; }
    Monomial coeff(const LevelFunction& a) const { return {unit_ideal(), unit_ideal(), a}; }

    Monomial product(const Monomial& X, const Monomial& Y) const {
        IntegralIdeal g = ideal_gcd(K_, X.s2, Y.s1);
        IntegralIdeal sp = ideal_div(K_, X.s2, g), tp = ideal_div(K_, Y.s1, g);
        LevelFunction left = rho_fn(fmul(X.c, rho_fn(pi_fn(g), sp)), tp);
        LevelFunction c = fmul(left, rho_fn(Y.c, sp));
        return {ideal_mul(K_, X.s1, tp), ideal_mul(K_, sp, Y.s2), c};
    }

    Monomial adjoint(const Monomial& X) const { return {X.s2, X.s1, X.c}; }

    // s1, s2 coprime and the coefficient supported on pi_{s1 s2}
    Monomial canonical(const Monomial& X) const {
        IntegralIdeal g = ideal_gcd(K_, X.s1, X.s2);
        Monomial Y{ideal_div(K_, X.s1, g), ideal_div(K_, X.s2, g), sigma_fn(X.c, g)};
        Y.c = fmul(Y.c, pi_fn(ideal_mul(K_, Y.s1, Y.s2)));
        return Y;
    }

    bool mequal(const Monomial& X, const Monomial& Y) const {
        auto a = canonical(X), b = canonical(Y);
        bool za = is_zero(a.c), zb = is_zero(b.c);
        if (za || zb) return za && zb;
        return a.s1 == b.s1 && a.s2 == b.s2 && fequal(a.c, b.c);
    }

    void accumulate(AlgebraElement& E, const Monomial& X) const {
        auto c = canonical(X);
        if (is_zero(c.c)) return;
        auto key = std::make_pair(c.s1, c.s2);
        auto it = E.find(key);
        if (it == E.end()) E.emplace(key, c.c);
        else {
            it->second = fadd(it->second, c.c);
            if (is_zero(it->second)) E.erase(it);
        }
    }

    bool eequal(const AlgebraElement& A, const AlgebraElement& B) const {
        if (A.size() != B.size()) return false;
        for (auto& [k, v] : A) {
            auto it = B.find(k);
            if (it == B.end() || !fequal(v, it->second)) return false;
        }
        return true;
    }

    AlgebraElement eproduct(const AlgebraElement& A, const AlgebraElement& B) const {
        AlgebraElement out;
        for (auto& [ka, va] : A)
            for (auto& [kb, vb] : B) accumulate(out, product({ka.first, ka.second, va}, {kb.first, kb.second, vb}));
        return out;
    }

    AlgebraElement eadjoint(const AlgebraElement& A) const {
        AlgebraElement out;
        for (auto& [k, v] : A) accumulate(out, adjoint({k.first, k.second, v}));
        return out;
    }

    AlgebraElement element(const Monomial& X) const {
        AlgebraElement E;
        accumulate(E, X);
        return E;
    }

    // Generator relations for N(s), N(t) <= B; random triples draw s from N(s) <= triple_bound.
    Report crossed_monomial_calculus(const IntegralIdeal& f, Int B, std::uint64_t seed, int samples = 24, Int triple_bound = 3) const {
        Report rep;
        const std::string where = K_.tag() + " f=" + to_string(f) + " B=" + std::to_string(B);
        std::mt19937_64 rng(seed);
        auto ids = A_.ideals(B);
        bool r[7] = {true, true, true, true, true, true, true};
        json wit[7];
        for (auto& s : ids) {
            LevelFunction a = random_function(f, rng);
            auto fail = [&](int i) {
                r[i] = false;
                wit[i] = json{{"s", ideal_json(s)}};
            };
            if (!mequal(product(Ustar(s), U(s)), coeff(one()))) fail(0);
            if (!mequal(product(U(s), Ustar(s)), coeff(pi_fn(s)))) fail(1);
            if (!mequal(product(U(s), coeff(a)), product(coeff(rho_fn(a, s)), U(s)))) fail(4);
            if (!mequal(product(coeff(a), Ustar(s)), product(Ustar(s), coeff(rho_fn(a, s))))) fail(5);
            if (!mequal(product(product(Ustar(s), coeff(a)), U(s)), coeff(sigma_fn(a, s)))) fail(6);
            for (auto& t : ids) {
                if (!mequal(product(U(s), U(t)), U(ideal_mul(K_, s, t)))) {
                    r[2] = false;
                    wit[2] = json{{"s", ideal_json(s)}, {"t", ideal_json(t)}};
                }
                if (!mequal(Ustar(ideal_mul(K_, t, s)), product(Ustar(s), Ustar(t)))) {
                    r[3] = false;
                    wit[3] = json{{"s", ideal_json(s)}, {"t", ideal_json(t)}};
                }
            }
        }
        const char* names[7] = {"U*_s U_s = 1", "U_s U*_s = rho_s(1)", "U_s U_t = U_st", "U*_ts = U*_s U*_t", "U_s a = rho_s(a) U_s",
                                "a U*_s = U*_s rho_s(a)", "U*_s a U_s = sigma_s(a)"};
        const char* ids_[7] = {"isometry", "range_projection", "U_multiplicative", "Ustar_multiplicative", "U_covariance", "Ustar_covariance",
                               "compression"};
        for (int i = 0; i < 7; ++i) rep.check(std::string("bcalgebra.monomial_") + ids_[i] + "/" + where, names[i], r[i], wit[i]);

        // associativity, adjoint anti-multiplicativity and span closure on random triples
        bool assoc = true, adj = true, closed = true;
        json aw;
        auto small = A_.ideals(triple_bound);
        auto random_mono = [&]() {
            return Monomial{small[rng() % small.size()], small[rng() % small.size()], random_function(f, rng)};
        };
        for (int k = 0; k < samples; ++k) {
            auto X = random_mono(), Y = random_mono(), Z = random_mono();
            auto XY = product(X, Y);
            if (!mequal(product(XY, Z), product(X, product(Y, Z)))) {
                assoc = false;
                aw = json{{"sample", k}};
            }
            if (!mequal(adjoint(XY), product(adjoint(Y), adjoint(X)))) adj = false;
            // the product of sums of monomials is again a sum of monomials, bilinearly
            AlgebraElement S = element(X), T = element(Y);
            accumulate(S, Z);
            AlgebraElement lhs = eproduct(S, T), rhs = element(XY);
            accumulate(rhs, product(Z, Y));
            if (!eequal(lhs, rhs)) closed = false;
        }
        rep.check("bcalgebra.monomial_associative/" + where, "monomial product is associative", assoc, aw);
        rep.check("bcalgebra.monomial_adjoint/" + where, "(XY)* = Y* X*", adj);
        rep.check("bcalgebra.monomial_span_closed/" + where, "products of monomial sums are monomial sums", closed);
        return rep;
    }

private:
    const LevelSystem& L_;
    const Arithmetic& A_;
    NumberField K_;
    mutable std::map<std::pair<IntegralIdeal, IntegralIdeal>, std::vector<Int>> embed_;
    mutable std::map<std::pair<IntegralIdeal, IntegralIdeal>, std::vector<Int>> project_;
};

}  // namespace drbc
