#include "common.hpp"

using namespace drbc;
using namespace drbc::test;

namespace {

struct Ext {
    explicit Ext(Int m) : ctx(NumberField::quadratic(m)), F(ctx, field(0).E, field(m).E) {}
    ExtensionContext ctx;
    Functoriality F;
};

Ext& ext(Int m) {
    static std::map<Int, std::unique_ptr<Ext>> cache;
    auto it = cache.find(m);
    if (it == cache.end()) it = cache.emplace(m, std::make_unique<Ext>(m)).first;
    return *it->second;
}

}  // namespace

TEST(Extension, IdealMaps) {
    auto& X = ext(-1).ctx;
    auto p = gen(-1, 1, 1);
    EXPECT_EQ(X.extend(q(2)), ideal_mul(X.top(), p, p));
    EXPECT_EQ(X.norm(gen(-1, 2, 1)), q(5));
    EXPECT_EQ(X.norm(p), q(2));
    EXPECT_EQ(X.norm(principal(X.top(), 3)), q(9));
    for (Int m : extension_fields()) {
        auto& Y = ext(m).ctx;
        for (Int n = 1; n <= 30; ++n) EXPECT_EQ(Y.norm(Y.extend(q(n))), q(n * n));
        for (auto& b : ideals_up_to(Y.top(), 30)) EXPECT_EQ(Y.norm(b).a, b.norm());
    }
}

TEST(Ver, GaussianLevelTwo) {
    auto& E = ext(-1);
    auto m = E.F.dr_ver_map(q(2)).map;
    const auto& DQ = field(0).L.dr(q(2));
    const auto& DL = field(-1).L.dr(principal(E.ctx.top(), 2));
    ASSERT_EQ(m.size(), 2u);
    EXPECT_EQ(m[field(0).L.classify(DQ, q(1))], DL.identity);
    EXPECT_EQ(m[field(0).L.classify(DQ, q(2))], field(-1).L.classify(DL, principal(E.ctx.top(), 2)));
    EXPECT_TRUE(LevelSystem::is_homomorphism(DQ, DL, m));
    auto triv = E.F.dr_ver_map(q(1)).map;
    EXPECT_EQ(triv, (std::vector<Int>{0}));
}

TEST(Ver, NotInjectiveAtThree) {
    auto m = ext(-1).F.dr_ver_map(q(3)).map;
    EXPECT_EQ(m.size(), 3u);
    EXPECT_FALSE(is_injective(m));
}

TEST(Norm, GaussianLevelFive) {
    auto& E = ext(-1);
    auto m = E.F.dr_norm_map(q(5)).map;
    const auto& DQ = field(0).L.dr(q(5));
    const auto& DL = field(-1).L.dr(principal(E.ctx.top(), 5));
    Int zero = field(0).L.classify(DQ, q(5));
    EXPECT_EQ(m[field(-1).L.classify(DL, gen(-1, 2, 1))], zero);
    EXPECT_EQ(m[DL.identity], DQ.identity);
    EXPECT_TRUE(LevelSystem::is_homomorphism(DL, DQ, m));
}

TEST(MapChecks, Grid) {
    for (Int m : extension_fields())
        for (Int n : {1, 2, 3, 5, 6}) expect_clean(ext(m).F.map_checks(q(n)));
    expect_clean(ext(2).F.map_checks(q(2)));
    expect_clean(ext(-5).F.map_checks(q(3)));
}

TEST(Omega, GaussianLevelTwo) {
    auto om = ext(-1).F.omega_map(q(2));
    auto p = gen(-1, 1, 1);
    EXPECT_EQ(om.size(), 3u);
    EXPECT_EQ(om.at(unit_ideal()), q(1));
    EXPECT_EQ(om.at(p), q(1));
    EXPECT_EQ(om.at(principal(ext(-1).ctx.top(), 2)), q(2));
    expect_all_pass(ext(-1).F.omega_checks(q(2)));
}

// 6 O_L has 12 divisors in Q(sqrt(-5)); omega sends them onto the 4 divisors of 6.
TEST(Omega, MinusFiveLevelSix) {
    auto& E = ext(-5);
    auto om = E.F.omega_map(q(6));
    EXPECT_EQ(om.size(), 12u);
    std::set<IntegralIdeal> img;
    for (auto& [D, n] : om) img.insert(n);
    EXPECT_EQ(img, (std::set<IntegralIdeal>{q(1), q(2), q(3), q(6)}));
    for (Int d : {1, 2, 3, 6}) EXPECT_EQ(om.at(E.ctx.extend(q(d))), q(d));
    expect_all_pass(E.F.omega_checks(q(6)));
}

TEST(Transitions, NormAndComponents) {
    expect_all_pass(ext(-1).F.norm_transition(q(2), q(4)));
    expect_clean(ext(-1).F.component_restriction_check(q(2), q(4)));
    expect_all_pass(ext(-3).F.norm_transition(q(1), q(3)));
    expect_clean(ext(-3).F.component_restriction_check(q(3), q(6)));
    expect_clean(ext(2).F.component_restriction_check(q(2), q(4)));
}

TEST(Bimodule, InnerProducts) {
    auto& E = ext(-1);
    auto& EQ = field(0).E;
    auto p = gen(-1, 1, 1), r = gen(-1, 2, 1);
    BimoduleVector u{{p, EQ.coeff(EQ.one())}}, v{{r, EQ.coeff(EQ.one())}};
    EXPECT_TRUE(EQ.eequal(E.F.inner(u, u), EQ.element(EQ.coeff(EQ.one()))));
    EXPECT_TRUE(E.F.inner(u, v).empty());
    auto e = E.F.expectation(p, p);
    ASSERT_TRUE(e.has_value());
    EXPECT_FALSE(E.F.expectation(p, r).has_value());
}

TEST(Bimodule, Balancing) {
    auto& E = ext(-1);
    auto& EQ = field(0).E;
    auto t = gen(-1, 2, 1);
    // U_{t (3)} (x) 1 = U_t (x) U_3
    BimoduleVector a{{ideal_mul(E.ctx.top(), t, E.ctx.extend(q(3))), EQ.coeff(EQ.one())}};
    BimoduleVector b{{t, EQ.U(q(3))}};
    EXPECT_TRUE(E.F.nequal(E.F.normalize(a), E.F.normalize(b)));
}

TEST(Bimodule, AxiomSuite) {
    for (Int m : extension_fields()) expect_all_pass(ext(m).F.bimodule_checks(16, 1));
}
