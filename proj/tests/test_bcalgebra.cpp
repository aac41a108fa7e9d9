#include "common.hpp"

using namespace drbc;
using namespace drbc::test;

namespace {

Int res(Int n, Int r) {
    ResidueRing R(NumberField::rational(), q(n), false);
    return field(0).L.iota(q(n)).map[R.index(Elem{((r % n) + n) % n, 0})];
}

}  // namespace

TEST(Operators, SigmaRational) {
    auto& E = field(0).E;
    auto S = E.sigma_op(q(3), q(2));
    EXPECT_EQ(S.rows, 3);
    EXPECT_EQ(S.cols, 6);
    // (sigma h)(x) = h(2x)
    for (Int x = 0; x < 3; ++x) EXPECT_EQ(S.col[res(3, x)], res(6, 2 * x));
    EXPECT_EQ(E.sigma_op(q(6), q(1)), identity_index(6));
}

TEST(Operators, SigmaGaussianSurjective) {
    auto& E = field(-1).E;
    auto p = gen(-1, 1, 1);
    auto S = E.sigma_op(p, p);
    EXPECT_EQ(S.rows, 2);
    EXPECT_EQ(S.cols, 3);
    EXPECT_TRUE(is_injective(S.col));
}

TEST(Operators, RhoRational) {
    auto& E = field(0).E;
    auto R = E.rho_op(q(3), q(2));
    EXPECT_EQ(R.rows, 6);
    EXPECT_EQ(R.cols, 3);
    // (rho h)(y) = h(y/2) for even y, else 0
    for (Int y = 0; y < 6; ++y) {
        if (y % 2) EXPECT_EQ(R.col[res(6, y)], -1);
        else EXPECT_EQ(R.col[res(6, y)], res(3, y / 2));
    }
    EXPECT_EQ(E.rho_op(q(6), q(1)), identity_index(6));
    // rho_d(1) = pi_d
    auto one = E.constant(q(3), 1);
    EXPECT_TRUE(E.fequal(E.apply(R, one, q(6)), E.lift(E.pi_fn(q(2)), q(6))));
    EXPECT_TRUE(E.fequal(E.rho_fn(E.one(), q(2)), E.pi_fn(q(2))));
}

TEST(Relations, Examples) {
    expect_all_pass(field(0).E.relation_suite(q(1), q(2), q(3)));
    expect_all_pass(field(0).E.relation_suite(q(1), q(1), q(1)));
    auto p = gen(-1, 1, 1);
    expect_all_pass(field(-1).E.relation_suite(unit_ideal(), p, p));
    expect_all_pass(field(0).E.transition_compat(q(2), q(4), q(3)));
    expect_all_pass(field(0).E.transition_compat(q(2), q(2), q(3)));
    auto K3 = NumberField::quadratic(-3);
    expect_all_pass(field(-3).E.transition_compat(unit_ideal(), principal(K3, 2), principal(K3, 2)));
}

TEST(Relations, GridSweep) {
    for (Int m : grid_fields()) {
        auto& C = field(m);
        auto ds = C.A.ideals(4);
        for (auto& f : C.A.ideals(6))
            for (std::size_t i = 0; i < ds.size(); ++i)
                for (std::size_t j = i; j < ds.size(); ++j) expect_all_pass(C.E.relation_suite(f, ds[i], ds[j]));
    }
}

TEST(Orbits, RationalSix) {
    auto& C = field(0);
    const auto& D = C.L.dr(q(6));
    const auto& G = C.A.ray_class_group(q(6));
    std::set<std::set<Int>> orbits;
    for (Int x = 0; x < D.size(); ++x) {
        std::set<Int> o;
        for (Int g = 0; g < G.order(); ++g) o.insert(C.L.galois_act(D, g, x));
        orbits.insert(o);
    }
    std::set<std::set<Int>> want{{res(6, 1), res(6, 5)}, {res(6, 2), res(6, 4)}, {res(6, 3)}, {res(6, 0)}};
    EXPECT_EQ(orbits, want);
    expect_all_pass(C.E.galois_orbit_structure(q(6)));
}

TEST(Orbits, GaussianFive) {
    auto& C = field(-1);
    auto f = principal(C.A.field(), 5);
    const auto& D = C.L.dr(f);
    const auto& G = C.A.ray_class_group(f);
    std::multiset<Int> sizes;
    std::set<Int> seen;
    for (Int x = 0; x < D.size(); ++x) {
        if (seen.count(x)) continue;
        std::set<Int> o;
        for (Int g = 0; g < G.order(); ++g) o.insert(C.L.galois_act(D, g, x));
        seen.insert(o.begin(), o.end());
        sizes.insert(static_cast<Int>(o.size()));
    }
    EXPECT_EQ(sizes, (std::multiset<Int>{1, 1, 1, 4}));
    expect_all_pass(C.E.galois_orbit_structure(f));
}

TEST(Equivariant, Dimensions) {
    auto M = field(0).E.equivariant_module(q(6));
    EXPECT_EQ(M.basis.size(), 6u);
    expect_all_pass(field(0).E.equivariant_checks(q(6)));

    auto N = field(-5).E.equivariant_module(unit_ideal());
    EXPECT_EQ(N.basis.size(), 2u);
    expect_all_pass(field(-5).E.equivariant_checks(unit_ideal()));

    auto T = field(0).E.equivariant_module(q(1));
    EXPECT_EQ(T.basis.size(), 1u);
}

TEST(Equivariant, GridSweep) {
    for (Int m : grid_fields())
        for (auto& f : field(m).A.ideals(16)) expect_all_pass(field(m).E.equivariant_checks(f));
}

TEST(KmsInfinity, Evaluation) {
    expect_all_pass(field(0).E.kms_infinity_evaluation(q(6)));
    expect_all_pass(field(-1).E.kms_infinity_evaluation(principal(NumberField::quadratic(-1), 5)));
}

TEST(Symmetry, Compatibility) {
    expect_all_pass(field(0).E.symmetry_compat(q(5), q(2)));
    expect_all_pass(field(0).E.symmetry_compat(q(5), q(1)));
    auto K = NumberField::quadratic(-5);
    auto P = ideal_from_generators(K, {Elem{2, 0}, Elem{1, 1}});
    expect_all_pass(field(-5).E.symmetry_compat(principal(K, 3), P));
    EXPECT_THROW(field(0).E.symmetry_compat(q(6), q(2)), std::domain_error);
}

TEST(Monomials, BasicRelations) {
    auto& E = field(0).E;
    // U*_2 U_2 = 1
    EXPECT_TRUE(E.mequal(E.product(E.Ustar(q(2)), E.U(q(2))), E.coeff(E.one())));
    // U_3 U*_3 = pi_3
    EXPECT_TRUE(E.mequal(E.product(E.U(q(3)), E.Ustar(q(3))), E.coeff(E.pi_fn(q(3)))));
    // U_2 U_3 = U_6
    EXPECT_TRUE(E.mequal(E.product(E.U(q(2)), E.U(q(3))), E.U(q(6))));
    EXPECT_FALSE(E.mequal(E.U(q(2)), E.U(q(3))));
}

TEST(Monomials, Calculus) {
    expect_all_pass(field(0).E.crossed_monomial_calculus(q(2), 6, 3));
    expect_all_pass(field(-1).E.crossed_monomial_calculus(gen(-1, 1, 1), 5, 4, 12));
    expect_all_pass(field(3).E.crossed_monomial_calculus(unit_ideal(), 4, 5, 12));
}

TEST(Words, RandomTransitions) {
    for (Int m : {0, -1, 2}) {
        const auto& K = field(m).A.field();
        expect_all_pass(field(m).E.random_words(unit_ideal(), {primes_above(K, 2).front(), primes_above(K, 3).front()}, 11, 8));
    }
}

TEST(StarAutomorphism, Remark) { expect_clean(field(-1).E.star_automorphism_remark(principal(NumberField::quadratic(-1), 5))); }
