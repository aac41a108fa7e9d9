#include <cmath>
#include <limits>

#include "common.hpp"

using namespace drbc;
using namespace drbc::test;

TEST(Field, Invariants) {
    auto Q = NumberField::rational();
    EXPECT_EQ(Q.discriminant(), 1);
    EXPECT_EQ(Q.r1(), 1);
    EXPECT_EQ(Q.r2(), 0);

    auto Ki = NumberField::quadratic(-1);
    EXPECT_EQ(Ki.discriminant(), -4);
    EXPECT_EQ(Ki.r1(), 0);
    EXPECT_EQ(Ki.r2(), 1);

    auto K5 = NumberField::quadratic(5);
    EXPECT_EQ(K5.discriminant(), 5);
    EXPECT_EQ(K5.r1(), 2);
    EXPECT_EQ(K5.r2(), 0);
    // omega = (1 + sqrt 5)/2 is a root of x^2 - x - 1
    double w = omega_value(K5, 0);
    EXPECT_NEAR(w * w - w - 1, 0.0, 1e-12);
    EXPECT_EQ(enorm(K5, Elem{0, 1}), -1);
    EXPECT_EQ(etrace(K5, Elem{0, 1}), 1);
}

TEST(Field, ParseAndTags) {
    EXPECT_TRUE(NumberField::parse("0").is_rational());
    EXPECT_TRUE(NumberField::parse("rational").is_rational());
    EXPECT_EQ(NumberField::parse("-5").discriminant(), -20);
    EXPECT_EQ(NumberField::parse("3").discriminant(), 12);
    EXPECT_THROW(NumberField::parse("x"), std::invalid_argument);
    EXPECT_THROW(NumberField::quadratic(4), std::invalid_argument);
}

TEST(Arith, CheckedOverflow) {
    const Int big = std::numeric_limits<Int>::max();
    EXPECT_THROW(mul(big, 2), OverflowError);
    EXPECT_THROW(add(big, 1), OverflowError);
    EXPECT_EQ(mul(1 << 20, 1 << 20), Int{1} << 40);
}

TEST(Ideal, Multiplication) {
    auto Q = NumberField::rational();
    EXPECT_EQ(ideal_mul(Q, q(6), q(4)), q(24));

    auto Ki = NumberField::quadratic(-1);
    auto p = gen(-1, 1, 1);
    EXPECT_EQ(p, (IntegralIdeal{2, 1, 1}));
    auto p2 = ideal_mul(Ki, p, p);
    EXPECT_EQ(p2, principal(Ki, 2));
    EXPECT_EQ(p2.norm(), 4);

    auto K = NumberField::quadratic(-5);
    auto P = ideal_from_generators(K, {Elem{2, 0}, Elem{1, 1}});
    EXPECT_EQ(P.norm(), 2);
    EXPECT_EQ(ideal_mul(K, P, P), principal(K, 2));
}

TEST(Ideal, GcdLcmDivision) {
    auto Q = NumberField::rational();
    EXPECT_EQ(ideal_gcd(Q, q(6), q(4)), q(2));
    EXPECT_EQ(ideal_lcm(Q, q(6), q(4)), q(12));

    auto Ki = NumberField::quadratic(-1);
    auto p = gen(-1, 1, 1);
    EXPECT_EQ(ideal_gcd(Ki, principal(Ki, 2), p), p);
    EXPECT_EQ(ideal_div(Ki, principal(Ki, 2), p), p);
    EXPECT_THROW(ideal_div(Ki, p, principal(Ki, 2)), std::domain_error);
}

TEST(Ideal, Factorization) {
    auto Ki = NumberField::quadratic(-1);
    EXPECT_TRUE(factor_ideal(Ki, unit_ideal()).empty());

    auto fs = factor_ideal(Ki, principal(Ki, 10));
    ASSERT_EQ(fs.size(), 3u);
    std::map<IntegralIdeal, int> got;
    for (auto& pp : fs) got[pp.prime] = pp.exponent;
    EXPECT_EQ(got[gen(-1, 1, 1)], 2);
    EXPECT_EQ(got[gen(-1, 2, 1)], 1);
    EXPECT_EQ(got[gen(-1, 2, -1)], 1);

    auto K = NumberField::quadratic(-5);
    auto f2 = factor_ideal(K, principal(K, 2));
    ASSERT_EQ(f2.size(), 1u);
    EXPECT_EQ(f2[0].prime, ideal_from_generators(K, {Elem{2, 0}, Elem{1, 1}}));
    EXPECT_EQ(f2[0].exponent, 2);
    EXPECT_EQ(splitting_data(K, f2[0].prime), (std::pair<int, int>{2, 1}));
}

TEST(Ideal, Enumeration) {
    EXPECT_EQ(ideals_up_to(NumberField::rational(), 5), (std::vector<IntegralIdeal>{q(1), q(2), q(3), q(4), q(5)}));

    auto Ki = NumberField::quadratic(-1);
    auto is = ideals_up_to(Ki, 5);
    std::set<IntegralIdeal> want{unit_ideal(), gen(-1, 1, 1), principal(Ki, 2), gen(-1, 2, 1), gen(-1, 2, -1)};
    EXPECT_EQ(std::set<IntegralIdeal>(is.begin(), is.end()), want);
    EXPECT_EQ(is.size(), 5u);

    auto K = NumberField::quadratic(-5);
    EXPECT_EQ(ideals_up_to(K, 2), (std::vector<IntegralIdeal>{unit_ideal(), ideal_from_generators(K, {Elem{2, 0}, Elem{1, 1}})}));
}

// Ideal counts match the Dirichlet coefficients from factorization.
TEST(Ideal, CountsMatchFactorization) {
    for (Int m : grid_fields()) {
        auto K = NumberField::from_tag(m);
        std::map<Int, Int> count;
        for (auto& I : ideals_up_to(K, 60)) ++count[I.norm()];
        for (Int n = 1; n <= 60; ++n) {
            Int expect = 1;
            for (auto [p, k] : factor_int(n)) {
                auto ps = primes_above(K, p);
                if (ps.size() == 2) expect *= k + 1;
                else if (splitting_data(K, ps[0]).first == 2 || K.is_rational()) expect *= 1;
                else expect *= (k % 2 == 0) ? 1 : 0;
            }
            EXPECT_EQ(count[n], expect) << K.tag() << " n=" << n;
        }
    }
}

TEST(Ideal, RandomizedLawsOverGrid) {
    std::mt19937_64 rng(7);
    for (Int m : grid_fields()) {
        auto K = NumberField::from_tag(m);
        auto is = ideals_up_to(K, 30);
        std::uniform_int_distribution<std::size_t> pick(0, is.size() - 1);
        for (int k = 0; k < 40; ++k) {
            auto a = is[pick(rng)], b = is[pick(rng)], c = is[pick(rng)];
            auto ab = ideal_mul(K, a, b);
            EXPECT_EQ(ab.norm(), a.norm() * b.norm());
            EXPECT_EQ(ab, ideal_mul(K, b, a));
            EXPECT_EQ(ideal_mul(K, ab, c), ideal_mul(K, a, ideal_mul(K, b, c)));
            EXPECT_EQ(ideal_div(K, ab, b), a);
            auto g = ideal_gcd(K, a, b), l = ideal_lcm(K, a, b);
            EXPECT_EQ(ideal_mul(K, g, l), ab);
            EXPECT_TRUE(divides(K, g, a) && divides(K, a, l));
            auto fs = factor_ideal(K, ab);
            IntegralIdeal back = unit_ideal();
            for (auto& pp : fs) back = ideal_mul(K, back, ideal_pow(K, pp.prime, pp.exponent));
            EXPECT_EQ(back, ab);
        }
    }
}

TEST(Units, Groups) {
    EXPECT_EQ(unit_group(NumberField::rational()).w, 2);
    auto Ui = unit_group(NumberField::quadratic(-1));
    EXPECT_EQ(Ui.w, 4);
    EXPECT_EQ(Ui.zeta, (Elem{0, 1}));
    EXPECT_EQ(unit_group(NumberField::quadratic(-3)).w, 6);
    auto U2 = unit_group(NumberField::quadratic(2));
    ASSERT_TRUE(U2.has_eps);
    EXPECT_EQ(U2.eps, (Elem{1, 1}));
    EXPECT_EQ(U2.eps_norm, -1);
    auto U3 = unit_group(NumberField::quadratic(3));
    EXPECT_EQ(U3.eps, (Elem{2, 1}));
    EXPECT_EQ(U3.eps_norm, 1);
}

TEST(Units, TotallyPositiveLift) {
    auto Q = NumberField::rational();
    EXPECT_EQ(totally_positive_lift(Q, q(6), Elem{5, 0}), (Elem{5, 0}));
    EXPECT_EQ(totally_positive_lift(Q, q(6), Elem{0, 0}), (Elem{6, 0}));

    auto K = NumberField::quadratic(2);
    auto x = totally_positive_lift(K, principal(K, 2), Elem{1, 1});
    EXPECT_TRUE(totally_positive(K, x));
    EXPECT_TRUE(contains(K, principal(K, 2), esub(x, Elem{1, 1})));
    EXPECT_EQ(x, (Elem{3, 1}));
}

TEST(Units, RayGeneratorSearch) {
    auto& Q = field(0).A;
    auto r = Q.search(as_fractional(q(7)), as_fractional(q(6)), true);
    ASSERT_TRUE(r.found());
    EXPECT_EQ(r.x->num, (Elem{7, 0}));

    auto& K = field(-5).A;
    auto P = ideal_from_generators(K.field(), {Elem{2, 0}, Elem{1, 1}});
    EXPECT_EQ(K.search(as_fractional(P), as_fractional(principal(K.field(), 3)), false).status, RaySearch::NotPrincipal);

    auto& R = field(2).A;
    auto c = gen(2, 3, 1);
    EXPECT_EQ(R.search(as_fractional(c), as_fractional(principal(R.field(), 2)), true).status, RaySearch::NoAdmissibleGenerator);
}
