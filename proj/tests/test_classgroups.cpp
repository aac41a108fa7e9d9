#include "common.hpp"

using namespace drbc;
using namespace drbc::test;

TEST(Totient, Values) {
    EXPECT_EQ(euler_phi(NumberField::rational(), q(6)), 2);
    auto Ki = NumberField::quadratic(-1);
    EXPECT_EQ(euler_phi(Ki, principal(Ki, 2)), 2);
    EXPECT_EQ(euler_phi(Ki, principal(Ki, 5)), 16);
}

TEST(Totient, ResidueRingCount) {
    for (Int m : grid_fields()) {
        auto K = NumberField::from_tag(m);
        for (auto& f : ideals_up_to(K, 30)) {
            ResidueRing R(K, f);
            EXPECT_EQ(static_cast<Int>(R.units().size()), euler_phi(K, f)) << K.tag() << " " << to_string(f);
        }
    }
}

TEST(Totient, Identity) {
    auto t = verify_totient_identity(NumberField::rational(), q(6));
    EXPECT_EQ(t.sum, 6);
    auto Ki = NumberField::quadratic(-1);
    EXPECT_EQ(verify_totient_identity(Ki, principal(Ki, 2)).sum, 4);
    auto K = NumberField::quadratic(-5);
    auto t5 = verify_totient_identity(K, principal(K, 2));
    EXPECT_EQ(t5.terms.size(), 3u);
    EXPECT_EQ(t5.sum, 4);
}

TEST(ClassGroup, Orders) {
    EXPECT_EQ(field(0).A.class_number(), 1);
    EXPECT_EQ(field(-1).A.class_number(), 1);
    EXPECT_EQ(field(-3).A.class_number(), 1);
    auto& A = field(-5).A;
    EXPECT_EQ(A.class_number(), 2);
    auto P = ideal_from_generators(A.field(), {Elem{2, 0}, Elem{1, 1}});
    EXPECT_EQ(A.class_group().reps.at(1), P);
    EXPECT_FALSE(A.same_ideal_class(P, unit_ideal()));
    EXPECT_TRUE(A.same_ideal_class(P, ideal_from_generators(A.field(), {Elem{3, 0}, Elem{1, 1}})));
}

TEST(ClassGroup, Narrow) {
    EXPECT_EQ(field(2).A.narrow_class_group().order(), 1);
    EXPECT_EQ(field(3).A.narrow_class_group().order(), 2);
    EXPECT_EQ(field(-1).A.narrow_class_group().order(), 1);
    EXPECT_EQ(field(5).A.narrow_class_group().order(), 1);
}

TEST(RayClass, Structures) {
    auto inv = [](Int m, const IntegralIdeal& f) { return field(m).A.ray_class_group(f).group.invariant_factors(); };
    EXPECT_EQ(inv(0, q(5)), (std::vector<Int>{4}));
    EXPECT_EQ(field(-1).A.ray_class_group(principal(NumberField::quadratic(-1), 2)).order(), 1);
    EXPECT_EQ(field(2).A.ray_class_group(principal(NumberField::quadratic(2), 2)).order(), 2);
    EXPECT_EQ(inv(-1, principal(NumberField::quadratic(-1), 5)), (std::vector<Int>{4}));
    EXPECT_EQ(inv(-5, principal(NumberField::quadratic(-5), 3)), (std::vector<Int>{2, 2}));
    EXPECT_EQ(inv(5, principal(NumberField::quadratic(5), 4)), (std::vector<Int>{2, 2}));
    EXPECT_EQ(inv(-3, principal(NumberField::quadratic(-3), 7)), (std::vector<Int>{6}));
}

TEST(RayClass, DiscreteLogQ5) {
    auto& A = field(0).A;
    const auto& G = A.ray_class_group(q(5));
    Int c2 = A.ray_class(G, q(2)), c3 = A.ray_class(G, q(3)), c4 = A.ray_class(G, q(4));
    EXPECT_EQ(G.group.element_order(c2), 4);
    EXPECT_EQ(c4, G.group.op(c2, c2));
    EXPECT_EQ(c3, G.group.op(c4, c2));
    EXPECT_EQ(A.ray_class(G, q(1)), G.group.identity());
    for (Int e : A.ray_dlog(G, q(1))) EXPECT_EQ(e, 0);
}

TEST(RayClass, RejectsNonCoprime) {
    auto& A = field(-1).A;
    const auto& G = A.ray_class_group(principal(A.field(), 5));
    EXPECT_THROW(A.ray_class(G, gen(-1, 2, 1)), std::domain_error);
}

// Enumerated and structural orders agree; the kernel of j is the totally positive unit image.
TEST(RayClass, GridConsistency) {
    for (Int m : grid_fields()) {
        auto& A = field(m).A;
        for (auto& f : A.ideals(40)) {
            const auto& G = A.ray_class_group(f);
            EXPECT_EQ(static_cast<Int>(G.reps.size()), G.structural_order) << A.field().tag() << " " << to_string(f);
            EXPECT_EQ(A.j_kernel_direct(f), A.j_kernel_units(f)) << A.field().tag() << " " << to_string(f);
            // multiplicativity of the class map on representatives
            for (std::size_t i = 0; i < G.reps.size() && i < 6; ++i)
                for (std::size_t j = 0; j < G.reps.size() && j < 6; ++j)
                    EXPECT_EQ(A.ray_class(G, ideal_mul(A.field(), G.reps[i], G.reps[j])), G.group.op(i, j));
        }
    }
}

TEST(RayClass, SurjectionOnDivisors) {
    for (Int m : grid_fields()) {
        auto& A = field(m).A;
        for (auto& fp : A.ideals(24))
            for (auto& f : divisors(A.field(), fp)) {
                auto s = ray_surjection(A, A.ray_class_group(fp), A.ray_class_group(f));
                EXPECT_TRUE(is_surjective(s, A.ray_class_group(f).order()));
            }
    }
}
