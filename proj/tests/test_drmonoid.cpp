#include "common.hpp"

using namespace drbc;
using namespace drbc::test;

namespace {

// residue r mod n -> element of DR_{Q,(n)} via the iota dictionary
Int res(Int n, Int r) {
    auto& L = field(0).L;
    ResidueRing R(NumberField::rational(), q(n), false);
    return L.iota(q(n)).map[R.index(Elem{((r % n) + n) % n, 0})];
}

}  // namespace

TEST(DRMonoid, RationalSix) {
    auto& L = field(0).L;
    const auto& D = L.dr(q(6));
    EXPECT_EQ(D.size(), 6);
    EXPECT_EQ(D.units, (std::vector<Int>{res(6, 1), res(6, 5)}));
    for (Int a = 0; a < 6; ++a)
        for (Int b = 0; b < 6; ++b) EXPECT_EQ(D.mul(res(6, a), res(6, b)), res(6, a * b));
    EXPECT_EQ(L.dr(q(1)).size(), 1);
}

TEST(DRMonoid, SmallQuadraticLevels) {
    const auto& D = field(-1).L.dr(gen(-1, 1, 1));
    EXPECT_EQ(D.size(), 2);
    EXPECT_EQ(D.units.size(), 1u);

    const auto& C = field(-5).L.dr(unit_ideal());
    EXPECT_EQ(C.size(), 2);
    EXPECT_EQ(C.units.size(), 2u);
}

TEST(DRMonoid, FrozenCardinalities) {
    auto size = [](Int m, Int n) { return field(m).L.dr(principal(NumberField::from_tag(m), n)).size(); };
    EXPECT_EQ(size(0, 5), 5);
    EXPECT_EQ(size(-1, 5), 7);
    EXPECT_EQ(size(-1, 2), 3);
    EXPECT_EQ(size(2, 2), 4);
    EXPECT_EQ(size(-5, 3), 10);
    EXPECT_EQ(size(5, 4), 6);
    EXPECT_EQ(size(-3, 7), 9);
    EXPECT_EQ(size(3, 1), 2);
}

TEST(YLevel, OrbitCounts) {
    auto& L = field(0).L;
    for (Int n = 1; n <= 20; ++n) EXPECT_EQ(L.y(q(n)).size(), n);
    EXPECT_EQ(field(2).L.y(principal(NumberField::quadratic(2), 2)).size(), 4);
    auto& Li = field(-1).L;
    auto f5 = principal(NumberField::quadratic(-1), 5);
    EXPECT_EQ(Li.y(f5).size(), Li.dr(f5).size());
}

TEST(Decomposition, Pieces) {
    auto& A = field(0).A;
    std::vector<Int> pieces;
    for (auto& d : divisors(A.field(), q(6))) pieces.push_back(A.ray_class_group(ideal_div(A.field(), q(6), d)).order());
    std::sort(pieces.begin(), pieces.end());
    EXPECT_EQ(pieces, (std::vector<Int>{1, 1, 2, 2}));

    auto& Ai = field(-1).A;
    Int total = 0;
    for (auto& d : divisors(Ai.field(), principal(Ai.field(), 2))) {
        EXPECT_EQ(Ai.ray_class_group(ideal_div(Ai.field(), principal(Ai.field(), 2), d)).order(), 1);
        ++total;
    }
    EXPECT_EQ(total, 3);
}

TEST(Psi, RationalSix) {
    auto& L = field(0).L;
    auto& A = field(0).A;
    const auto& Y = L.y(q(6));
    const auto& G = A.ray_class_group(q(6));
    ResidueRing R(NumberField::rational(), q(6), false);
    auto ps = L.psi(q(6));
    // [2 mod 6, class(5)] -> 2 * 5^{-1} = 4 mod 6
    EXPECT_EQ(ps.map[Y.orbit(R.index(Elem{2, 0}), A.ray_class(G, q(5)))], res(6, 4));
    EXPECT_EQ(ps.map[Y.orbit(R.index(Elem{1, 0}), G.group.identity())], L.dr(q(6)).identity);
}

TEST(Psi, RealQuadraticBijection) {
    auto& L = field(2).L;
    auto f = principal(NumberField::quadratic(2), 2);
    auto ps = L.psi(f);
    EXPECT_EQ(ps.map.size(), 4u);
    EXPECT_TRUE(is_injective(ps.map));
    expect_all_pass(L.psi_equivariance(f));
}

TEST(Iota, Dictionary) {
    auto& L = field(0).L;
    const auto& D = L.dr(q(6));
    auto io = L.iota(q(6)).map;
    for (Int r = 0; r < 6; ++r) EXPECT_EQ(io[r], L.classify(D, q(r == 0 ? 6 : r)));
    EXPECT_EQ(io[1], D.identity);
    expect_all_pass(field(3).L.iota_checks(gen(3, 1, 1)));
}

TEST(ClassifyResidue, Divisors) {
    auto& L = field(0).L;
    std::map<Int, IntegralIdeal> want{{0, q(6)}, {1, q(1)}, {2, q(2)}, {3, q(3)}, {4, q(2)}, {5, q(1)}};
    for (auto& rc : L.classify_residue(q(6))) {
        EXPECT_EQ(rc.divisor, want.at(rc.residue));
        EXPECT_TRUE(rc.unit_part.has_value());
    }

    auto Ki = NumberField::quadratic(-1);
    auto& Li = field(-1).L;
    ResidueRing R(Ki, principal(Ki, 2), false);
    for (auto& rc : Li.classify_residue(principal(Ki, 2))) {
        Elem x = R.elem(rc.residue);
        IntegralIdeal expect = x == Elem{0, 0} ? principal(Ki, 2) : (x == Elem{1, 1} ? gen(-1, 1, 1) : unit_ideal());
        EXPECT_EQ(rc.divisor, expect) << rc.residue;
    }
}

TEST(Projection, Fibers) {
    auto& L = field(0).L;
    auto pr = L.project(q(6), q(12)).map;
    std::map<Int, int> fib;
    for (Int x : pr) ++fib[x];
    EXPECT_EQ(fib.size(), 6u);
    for (auto& [x, c] : fib) EXPECT_EQ(c, 2);
    for (Int r = 0; r < 12; ++r) EXPECT_EQ(pr[res(12, r)], res(6, r));

    auto K = NumberField::quadratic(2);
    auto p2 = field(2).L.project(gen(2, 0, 1), principal(K, 2)).map;
    std::map<Int, int> f2;
    for (Int x : p2) ++f2[x];
    EXPECT_EQ(f2.size(), 2u);
    for (auto& [x, c] : f2) EXPECT_EQ(c, 2);

    auto id = L.project(q(6), q(6)).map;
    for (Int x = 0; x < 6; ++x) EXPECT_EQ(id[x], x);
}

TEST(Embed, Maps) {
    auto& L = field(0).L;
    auto lam = L.mult_embed(q(6), q(2)).map;
    for (Int r = 0; r < 6; ++r) EXPECT_EQ(lam[res(6, r)], res(12, 2 * r));

    auto Ki = NumberField::quadratic(-1);
    auto p = gen(-1, 1, 1);
    auto li = field(-1).L.mult_embed(p, p).map;
    EXPECT_EQ(li.size(), 2u);
    EXPECT_TRUE(is_injective(li));
    EXPECT_EQ(field(-1).L.dr(ideal_mul(Ki, p, p)).size(), 3);

    auto one = L.mult_embed(q(6), q(1)).map;
    for (Int x = 0; x < 6; ++x) EXPECT_EQ(one[x], x);
}

TEST(Audit, ClosedForm) {
    auto a = field(0).L.cardinality_audit(q(6));
    EXPECT_EQ(a["computed"], 6);
    EXPECT_EQ(a["closed_form"], 12);
    EXPECT_EQ(a["narrow_times_norm"], 6);
    EXPECT_FALSE(a["closed_form_agrees"].get<bool>());

    auto b = field(-1).L.cardinality_audit(principal(NumberField::quadratic(-1), 2));
    EXPECT_EQ(b["computed"], 3);
    EXPECT_EQ(b["closed_form"], 4);

    auto c = field(2).L.cardinality_audit(principal(NumberField::quadratic(2), 2));
    EXPECT_EQ(c["computed"], 4);
    EXPECT_EQ(c["closed_form"], 16);
    EXPECT_EQ(c["narrow_times_norm"], 4);
}

TEST(TripleAgreement, GridUpToTwenty) {
    for (Int m : grid_fields()) {
        auto& L = field(m).L;
        for (auto& f : field(m).A.ideals(20)) {
            expect_all_pass(L.triple_agreement(f));
            expect_all_pass(monoid_axioms(L.dr(f), L.field().tag()));
        }
    }
}

TEST(Maps, CompositionLaws) {
    for (Int m : grid_fields()) {
        auto& L = field(m).L;
        const auto& K = L.field();
        auto two = primes_above(K, 2).front(), three = primes_above(K, 3).front();
        expect_all_pass(L.projection_chain(unit_ideal(), two, ideal_mul(K, two, three)));
        expect_all_pass(L.embed_compose(unit_ideal(), two, three));
        expect_all_pass(L.embed_lcm(ideal_mul(K, ideal_mul(K, two, three), two), ideal_mul(K, two, two), three));
        expect_clean(L.projection_checks(two, ideal_mul(K, two, two)));
        expect_all_pass(L.embed_checks(two, three));
    }
}

TEST(Cache, RoundTrip) {
    auto& L = field(-5).L;
    auto f = principal(L.field(), 6);
    const auto& D = L.dr(f);
    auto j = dr_to_json(D);
    auto back = dr_from_json(json::parse(j.dump()));
    EXPECT_EQ(dr_to_json(back).dump(), j.dump());

    Arithmetic A(L.field());
    LevelSystem fresh(A);
    fresh.install(back);
    expect_all_pass(fresh.triple_agreement(f));

    auto dir = std::filesystem::temp_directory_path() / "drbc_test_cache";
    std::filesystem::remove_all(dir);
    write_cache(dir, D);
    auto loaded = read_cache(dir, L.field(), f);
    ASSERT_TRUE(loaded.has_value());
    EXPECT_EQ(dr_to_json(*loaded).dump(), j.dump());
    EXPECT_FALSE(read_cache(dir, L.field(), principal(L.field(), 7)).has_value());
    std::filesystem::remove_all(dir);
}
