#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bcalgebra.hpp"

namespace drbc {

struct Interval {
    long double lo = 0;
    long double hi = 0;

    bool contains(long double x) const { return lo <= x && x <= hi; }
    bool overlaps(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
    long double mid() const { return (lo + hi) / 2; }
};

inline json interval_json(const Interval& I) {
    auto num = [](long double x) -> json {
        if (std::isinf(x)) return "inf";
        return static_cast<double>(x);
    };
    return json::array({num(I.lo), num(I.hi)});
}

struct PartitionFunction {
    Rational beta;
    Int bound = 0;
    Interval ideal_sum;    // [partial sum, partial sum + tail]
    Interval euler;        // [product over N(p) <= B, times tail factor]
    Int ideal_count = 0;
    Int prime_count = 0;
    bool diverges = false;  // beta <= 1: partial sums only

    bool consistent() const { return diverges || ideal_sum.overlaps(euler); }
};

// Weights of the truncated Gibbs state, N(a)^{-beta} / Z_B.
struct TruncatedGibbsState {
    Rational beta;
    Int bound = 0;
    std::vector<IntegralIdeal> ideals;
    std::vector<Rational> weights;  // exact; empty when beta is not an integer
    std::vector<long double> approx;
};

struct LevelMeasure {
    IntegralIdeal level;
    std::vector<Rational> weight;
    Rational total;
};

inline long double to_ld(const Rational& q) { return static_cast<long double>(q); }

inline bool is_integer(const Rational& q) { return boost::multiprecision::denominator(q) == 1; }

// n^{-beta} exactly, for integer beta >= 0
inline Rational inverse_power(Int n, const Rational& beta) {
    auto e = static_cast<long>(boost::multiprecision::numerator(beta));
    boost::multiprecision::cpp_int p = 1;
    for (long k = 0; k < e; ++k) p *= n;
    return Rational(1) / Rational(p);
}

inline PartitionFunction partition_function(const NumberField& K, const Rational& beta, Int B) {
    if (beta <= 0 || B < 1) throw std::domain_error("partition_function: need beta > 0 and B >= 1");
    constexpr long double eps = std::numeric_limits<long double>::epsilon();
    PartitionFunction Z;
    Z.beta = beta;
    Z.bound = B;
    Z.diverges = beta <= 1;
    const long double b = to_ld(beta);

    auto ids = ideals_up_to(K, B);
    Z.ideal_count = static_cast<Int>(ids.size());
    long double s = 0;
    for (auto it = ids.rbegin(); it != ids.rend(); ++it) s += std::pow(static_cast<long double>(it->norm()), -b);
    const long double round = 4 * eps * static_cast<long double>(ids.size()) * s;

    long double prod = 1;
    Int np = 0;
    for (Int p : primes_up_to(B))
        for (auto& P : primes_above(K, p))
            if (P.norm() <= B) {
                prod /= 1 - std::pow(static_cast<long double>(P.norm()), -b);
                ++np;
            }
    Z.prime_count = np;
    const long double pround = 4 * eps * static_cast<long double>(np + 1) * prod;

    if (Z.diverges) {
        Z.ideal_sum = {s - round, std::numeric_limits<long double>::infinity()};
        Z.euler = {prod - pround, std::numeric_limits<long double>::infinity()};
        return Z;
    }
    const long double Bl = static_cast<long double>(B), lnB = std::log(Bl), b1 = b - 1;
    // ideal counts are bounded by the divisor function, whose summatory function is <= x(ln x + 1)
    long double tail = K.is_rational() ? std::pow(Bl, -b1) / b1 : b * std::pow(Bl, -b1) * ((lnB + 1) / b1 + 1 / (b1 * b1));
    Z.ideal_sum = {s - round, s + tail + round};
    // at most [K:Q] prime ideals of each norm; -log(1 - x) <= x / (1 - x)
    long double ptail = K.degree() * std::pow(Bl, -b1) / b1 / (1 - std::pow(Bl, -b));
    Z.euler = {prod - pround, prod * std::exp(ptail) + pround};
    return Z;
}

inline json partition_json(const PartitionFunction& Z) {
    json j{{"beta", Z.beta.str()}, {"bound", Z.bound}, {"ideal_sum", interval_json(Z.ideal_sum)}, {"euler_product", interval_json(Z.euler)},
           {"ideals", Z.ideal_count}, {"prime_ideals", Z.prime_count}, {"diverges", Z.diverges}};
    return j;
}

class Thermodynamics {
public:
    explicit Thermodynamics(const Endomotive& E) : E_(E), L_(E.levels()), A_(L_.arith()), K_(E.field()) {}

    LevelMeasure counting_measure(const IntegralIdeal& f) const {
        const Int n = L_.dr(f).size();
        return {f, std::vector<Rational>(n, Rational(1, n)), Rational(1)};
    }

    LevelMeasure pushforward(const LevelMeasure& mu, const IntegralIdeal& f) const {
        const auto& pr = E_.project_map(f, mu.level);
        LevelMeasure out{f, std::vector<Rational>(L_.dr(f).size(), Rational(0)), mu.total};
        for (std::size_t y = 0; y < pr.size(); ++y) out.weight[pr[y]] += mu.weight[y];
        return out;
    }

    // Failures are fatal over Q and imaginary fields and deviations over real quadratic fields.
    Status failure_status() const { return K_.is_real() && !K_.is_rational() ? Status::Deviation : Status::Fail; }

    Report check_uniformity(const IntegralIdeal& f, const IntegralIdeal& fp) const {
        Report rep;
        const std::string where = K_.tag() + " " + to_string(f) + "|" + to_string(fp);
        auto push = pushforward(counting_measure(fp), f);
        auto mu = counting_measure(f);
        bool ok = push.weight == mu.weight;
        json wit;
        if (!ok) {
            std::map<Int, Int> hist;
            const auto& pr = E_.project_map(f, fp);
            std::vector<Int> fiber(L_.dr(f).size(), 0);
            for (Int x : pr) ++fiber[x];
            for (Int s : fiber) ++hist[s];
            json h = json::object();
            for (auto& [s, c] : hist) h[std::to_string(s)] = c;
            wit = json{{"fiber_histogram", h}, {"source_size", L_.dr(fp).size()}, {"target_size", L_.dr(f).size()}};
        }
        rep.add("kms.uniformity/" + where, "pushforward of the normalized counting measure is the normalized counting measure",
                ok ? Status::Pass : failure_status(), wit);
        return rep;
    }

    // All singletons and `samples` random subsets.
    Report check_scaling(const IntegralIdeal& f, const IntegralIdeal& d, std::uint64_t seed, int samples = 8) const {
        Report rep;
        const std::string where = K_.tag() + " f=" + to_string(f) + " d=" + to_string(d);
        auto fd = ideal_mul(K_, f, d);
        const auto& lam = E_.embed_map(f, d);
        const Int n = L_.dr(f).size(), nd = L_.dr(fd).size();
        const Rational mu_f(1, n), mu_fd(1, nd), scale(1, d.norm());
        std::mt19937_64 rng(seed);
        std::vector<std::vector<Int>> subsets;
        for (Int x = 0; x < n; ++x) subsets.push_back({x});
        for (int k = 0; k < samples; ++k) {
            std::vector<Int> Z;
            for (Int x = 0; x < n; ++x)
                if (rng() % 2) Z.push_back(x);
            subsets.push_back(Z);
        }
        bool ok = true;
        json wit;
        for (auto& Z : subsets) {
            std::set<Int> img;
            for (Int x : Z) img.insert(lam[x]);
            Rational lhs = mu_fd * Rational(static_cast<Int>(img.size()));
            Rational rhs = scale * mu_f * Rational(static_cast<Int>(Z.size()));
            if (lhs != rhs && ok) {
                ok = false;
                wit = json{{"subset", Z}, {"lhs", lhs.str()}, {"rhs", rhs.str()}};
            }
        }
        rep.add("kms.scaling/" + where, "mu_{df}(lambda_d Z) = N(d)^{-1} mu_f(Z)", ok ? Status::Pass : failure_status(), wit);
        return rep;
    }

    TruncatedGibbsState gibbs_state(const Rational& beta, Int B) const {
        TruncatedGibbsState g;
        g.beta = beta;
        g.bound = B;
        g.ideals = A_.ideals(B);
        const bool exact = is_integer(beta) && beta >= 0;
        Rational Z = 0;
        long double Zl = 0;
        for (auto& a : g.ideals) {
            if (exact) {
                g.weights.push_back(inverse_power(a.norm(), beta));
                Z += g.weights.back();
            }
            g.approx.push_back(std::pow(static_cast<long double>(a.norm()), -to_ld(beta)));
            Zl += g.approx.back();
        }
        for (auto& w : g.weights) w /= Z;
        for (auto& w : g.approx) w /= Zl;
        return g;
    }

    // X e_a as (coefficient, ideal), or nothing.
    std::optional<std::pair<Rational, IntegralIdeal>> act(const Monomial& X, const IntegralIdeal& a) const {
        IntegralIdeal b = ideal_mul(K_, X.s2, a);
        if (!divides(K_, X.s1, b)) return std::nullopt;
        Rational v = X.c.v[L_.classify(L_.dr(X.c.level), b)];
        if (v == 0) return std::nullopt;
        return std::make_pair(v, ideal_div(K_, b, X.s1));
    }

    // The ideal hit by X from e_a, ignoring the coefficient.
    std::optional<IntegralIdeal> target(const Monomial& X, const IntegralIdeal& a) const {
        IntegralIdeal b = ideal_mul(K_, X.s2, a);
        if (!divides(K_, X.s1, b)) return std::nullopt;
        return ideal_div(K_, b, X.s1);
    }

    // phi(xy) = phi(y sigma_{i beta}(x)) on pairs of basis vectors inside the norm bound,
    // with xy and y sigma(x) formed by the monomial product.
    Report gibbs_kms_check(const IntegralIdeal& f, const Rational& beta, Int B, std::uint64_t seed, int samples = 16, Int s_bound = 4) const {
        Report rep;
        const std::string where = K_.tag() + " f=" + to_string(f) + " beta=" + beta.str() + " B=" + std::to_string(B);
        auto g = gibbs_state(beta, B);
        const bool exact = !g.weights.empty();
        std::map<IntegralIdeal, std::size_t> pos;
        for (std::size_t i = 0; i < g.ideals.size(); ++i) pos[g.ideals[i]] = i;
        auto inside = [&](const std::optional<IntegralIdeal>& a) { return a && pos.count(*a); };

        bool sums = true;
        if (exact) {
            Rational t = 0;
            for (auto& w : g.weights) t += w;
            sums = t == 1;
        }
        rep.check("kms.gibbs_normalized/" + where, "Gibbs weights sum to 1", sums);

        std::mt19937_64 rng(seed);
        auto small = A_.ideals(s_bound);
        std::vector<std::pair<Monomial, Monomial>> pairs;
        for (auto& s : small) {
            if (s.is_one()) continue;
            pairs.push_back({E_.U(s), E_.Ustar(s)});
            pairs.push_back({E_.Ustar(s), E_.U(s)});
        }
        pairs.push_back({E_.coeff(E_.random_function(f, rng)), E_.coeff(E_.random_function(f, rng))});
        for (int k = 0; k < samples; ++k) {
            auto pick = [&]() { return small[rng() % small.size()]; };
            Monomial x{pick(), pick(), E_.random_function(f, rng)};
            Monomial y{pick(), pick(), E_.random_function(f, rng)};
            pairs.push_back({x, y});
        }

        bool ok = true;
        long double worst = 0;
        json wit;
        Int terms = 0;
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            auto [x, y] = pairs[k];
            auto xy = E_.product(x, y);
            // sigma_{i beta}(x) = N(s2)^{-beta} N(s1)^{beta} x
            Rational sx_exact = 0;
            long double sx = std::pow(static_cast<long double>(x.s2.norm()), -to_ld(beta)) * std::pow(static_cast<long double>(x.s1.norm()), to_ld(beta));
            if (exact) sx_exact = inverse_power(x.s2.norm(), beta) / inverse_power(x.s1.norm(), beta);
            auto ysx = E_.product(y, x);
            Rational lhs = 0, rhs = 0;
            long double lhs_l = 0, rhs_l = 0, mag = 0;
            for (std::size_t i = 0; i < g.ideals.size(); ++i) {
                const auto& a = g.ideals[i];
                // left side: a with y e_a inside the bound
                if (inside(target(y, a))) {
                    if (auto r = act(xy, a); r && r->second == a) {
                        ++terms;
                        if (exact) lhs += g.weights[i] * r->first;
                        lhs_l += g.approx[i] * to_ld(r->first);
                        mag += std::fabs(g.approx[i] * to_ld(r->first));
                    }
                }
                // right side: b = a with x e_b inside the bound
                if (inside(target(x, a))) {
                    if (auto r = act(ysx, a); r && r->second == a) {
                        if (exact) rhs += g.weights[i] * sx_exact * r->first;
                        rhs_l += g.approx[i] * sx * to_ld(r->first);
                        mag += std::fabs(g.approx[i] * sx * to_ld(r->first));
                    }
                }
            }
            bool eq;
            if (exact) eq = lhs == rhs;
            else {
                long double tol = 64 * std::numeric_limits<long double>::epsilon() * (mag + 1) * static_cast<long double>(g.ideals.size());
                worst = std::max(worst, std::fabs(lhs_l - rhs_l));
                eq = std::fabs(lhs_l - rhs_l) <= tol;
            }
            if (!eq && ok) {
                ok = false;
                wit = json{{"pair", k}, {"x", json{ideal_json(x.s1), ideal_json(x.s2)}}, {"y", json{ideal_json(y.s1), ideal_json(y.s2)}},
                           {"lhs", exact ? json(lhs.str()) : json(static_cast<double>(lhs_l))},
                           {"rhs", exact ? json(rhs.str()) : json(static_cast<double>(rhs_l))}};
            }
        }
        std::string ref = "truncated Gibbs state satisfies phi(xy) = phi(y sigma_{i beta}(x))";
        if (beta == 1) ref += " (plausibility probe at beta = 1)";
        rep.check("kms.gibbs_kms/" + where, ref, ok, wit);
        rep.add("kms.gibbs_kms_arithmetic/" + where, "arithmetic used for the Gibbs check", Status::Info,
                json{{"mode", exact ? "exact" : "interval"}, {"pairs", pairs.size()}, {"nonzero_terms", terms},
                     {"max_abs_difference", static_cast<double>(worst)}});
        return rep;
    }

    // Vector states phi_w(x) = <e_1, pi_w(x) e_1>, pi_w(c) e_a = c([a] w) e_a, for w in DR_f^x.
    Report kms_infinity_simplex(const IntegralIdeal& f, std::uint64_t seed, int samples = 12, Int s_bound = 6) const {
        Report rep;
        const std::string where = K_.tag() + " f=" + to_string(f);
        const auto& D = L_.dr(f);
        const auto& G = A_.ray_class_group(f);
        const Int states = static_cast<Int>(D.units.size());
        rep.check("kms.kms_infinity_count/" + where, "extremal KMS_infinity states at level f number |C_f|", states == G.order(),
                  json{{"states", states}, {"ray_class_order", G.order()}});

        // C_f acts on the states through its action on the unit points
        bool free_ = true, trans = true;
        std::set<Int> orbit;
        for (Int g = 0; g < G.order(); ++g) {
            Int y = L_.galois_act(D, g, D.units.front());
            orbit.insert(y);
            for (Int w : D.units)
                if (g != G.group.identity() && L_.galois_act(D, g, w) == w) free_ = false;
        }
        trans = static_cast<Int>(orbit.size()) == states && std::includes(D.units.begin(), D.units.end(), orbit.begin(), orbit.end());
        rep.check("kms.kms_infinity_free/" + where, "the symmetry group acts freely on the KMS_infinity states", free_);
        rep.check("kms.kms_infinity_transitive/" + where, "the symmetry group acts transitively on the KMS_infinity states", trans);

        std::mt19937_64 rng(seed);
        auto small = A_.ideals(s_bound);
        bool vanish = true, evals = true;
        json vw;
        for (int k = 0; k < samples; ++k) {
            auto c = E_.random_function(f, rng);
            for (Int w : D.units)
                // <e_1, c e_1> = c([1] w) = c(w)
                if (c.v[D.mul(D.identity, w)] != c.v[w]) evals = false;
            for (auto& s1 : small)
                for (auto& s2 : small) {
                    // U*_{s1} c U_{s2} e_1 = c([s2] w) e_{s2/s1}: off the diagonal the target is never e_1
                    auto t = target(Monomial{s1, s2, c}, unit_ideal());
                    if (!(s1 == s2)) {
                        if (t && t->is_one()) vanish = false;
                        continue;
                    }
                    // on the diagonal the canonical form has s = (1) and coefficient c([s] .)
                    auto X = E_.canonical(Monomial{s1, s2, c});
                    if (!X.s1.is_one() || !X.s2.is_one()) {
                        vanish = false;
                        vw = json{{"s", ideal_json(s1)}};
                        continue;
                    }
                    const auto& DX = L_.dr(X.c.level);
                    const auto& pr = E_.project_map(f, X.c.level);
                    Int cls = L_.classify(D, s1);
                    for (Int x = 0; x < DX.size(); ++x) {
                        Int w = pr[x];
                        if (!D.is_unit(w)) continue;
                        if (X.c.v[x] != c.v[D.mul(cls, w)]) {
                            evals = false;
                            vw = json{{"s", ideal_json(s1)}, {"state", w}};
                        }
                    }
                }
        }
        rep.check("kms.kms_infinity_ground/" + where, "phi_w(U*_{s1} c U_{s2}) = delta_{s,1} c(w)", vanish && evals, vw);
        rep.merge(E_.kms_infinity_evaluation(f));
        return rep;
    }

private:
    const Endomotive& E_;
    const LevelSystem& L_;
    const Arithmetic& A_;
    NumberField K_;
};

}  // namespace drbc
