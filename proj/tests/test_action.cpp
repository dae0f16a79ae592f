#include "qball/action.hpp"
#include "qball/parse.hpp"
#include "qball/random.hpp"

#include <gtest/gtest.h>

using namespace qball;
using G = Generator;

TEST(Action, DiscTable) {
    UqAction act(1);
    auto z = AlgElement::z(1, 1), zs = AlgElement::zs(1, 1);
    EXPECT_EQ(act.apply({G::K, 1}, z), QScalar::q_pow(2) * z);
    EXPECT_EQ(act.apply({G::Kinv, 1}, z), QScalar::q_pow(-2) * z);
    EXPECT_EQ(act.apply({G::E, 1}, zs), AlgElement(1, QScalar::s_pow(-3)));
    EXPECT_EQ(act.apply({G::E, 1}, z), QScalar::s_pow(1, Gauss(-1)) * (z * z));
    EXPECT_EQ(act.apply({G::F, 1}, z), AlgElement(1, QScalar::s_pow(1)));
    EXPECT_EQ(act.apply({G::F, 1}, zs), QScalar::s_pow(5, Gauss(-1)) * (zs * zs));
}

TEST(Action, LeibnizOnSquare) {
    UqAction act(1);
    auto z = AlgElement::z(1, 1);
    QScalar c = -(QScalar::s_pow(1) + QScalar::s_pow(5));
    EXPECT_EQ(act.apply({G::E, 1}, z * z), c * z.pow(3));
}

TEST(Action, EFCommutatorOnZ) {
    UqAction act(1);
    auto z = AlgElement::z(1, 1);
    AlgElement ef = act.apply(GeneratorWord{1, {{G::E, 1}, {G::F, 1}}}, z);
    AlgElement fe = act.apply(GeneratorWord{1, {{G::F, 1}, {G::E, 1}}}, z);
    AlgElement kk = act.apply({G::K, 1}, z) - act.apply({G::Kinv, 1}, z);
    EXPECT_FALSE((ef - fe).is_zero());
    EXPECT_EQ(ef - fe, QScalar::lambda().inverse() * kk);
}

TEST(Action, WordBasics) {
    UqAction act(2);
    RandomSource rs(1);
    AlgElement f = rs.element(2, 3);
    EXPECT_EQ(act.apply(GeneratorWord{}, f), f);
    EXPECT_EQ(act.apply(GeneratorWord{1, {{G::K, 2}, {G::Kinv, 2}}}, f), f);
}

TEST(Action, Counit) {
    EXPECT_TRUE(counit(G{G::E, 1}).is_zero());
    EXPECT_TRUE(counit(GeneratorWord{1, {{G::K, 1}, {G::Kinv, 1}}}).is_one());
    EXPECT_TRUE(counit(GeneratorWord{}).is_one());
    for (int n = 1; n <= 3; ++n) {
        UqAction act(n);
        for (auto g : all_generators(n))
            EXPECT_EQ(act.apply(g, AlgElement::one(n)), AlgElement(n, counit(g))) << g.name();
    }
}

TEST(Action, BallTable) {
    const int n = 3;
    UqAction act(n);
    auto z = [](int k) { return AlgElement::z(3, k); };
    auto zs = [](int k) { return AlgElement::zs(3, k); };
    EXPECT_EQ(act.apply({G::E, 1}, z(2)), QScalar::s_pow(-1) * z(1));
    EXPECT_EQ(act.apply({G::E, 1}, zs(1)), QScalar::s_pow(-3, Gauss(-1)) * zs(2));
    EXPECT_TRUE(act.apply({G::E, 1}, z(3)).is_zero());
    EXPECT_EQ(act.apply({G::F, 2}, z(2)), QScalar::s_pow(1) * z(3));
    EXPECT_EQ(act.apply({G::F, 2}, zs(3)), QScalar::s_pow(3, Gauss(-1)) * zs(2));
    EXPECT_EQ(act.apply({G::E, 3}, z(1)), QScalar::s_pow(1, Gauss(-1)) * (z(3) * z(1)));
    EXPECT_EQ(act.apply({G::F, 3}, zs(2)), QScalar::s_pow(5, Gauss(-1)) * (zs(2) * zs(3)));
    EXPECT_EQ(act.apply({G::K, 3}, z(1)), QScalar::q() * z(1));
    EXPECT_EQ(act.apply({G::K, 1}, zs(2)), QScalar::q() * zs(2));
    EXPECT_EQ(act.apply({G::K, 2}, AlgElement::Q(n, 1)), AlgElement::Q(n, 1));
}

TEST(Action, StarCompatibilityDisc) {
    UqAction act(1);
    auto z = AlgElement::z(1, 1);
    EXPECT_EQ(act.apply({G::E, 1}, z).star(), QScalar::q_pow(-2) * act.apply({G::F, 1}, z.star()));
}

TEST(Action, ModuleAlgebraAxiomsRandomized) {
    for (int n = 1; n <= 3; ++n) {
        UqAction act(n);
        RandomSource rs(100 + n);
        for (int t = 0; t < 8; ++t) {
            AlgElement f = rs.element(n, 3, 2, true), g = rs.element(n, 3, 2, true);
            for (auto gen : all_generators(n))
                for (auto& r : verify_module_algebra(act, f, g, gen))
                    EXPECT_TRUE(r.pass()) << r.relation << " n=" << n << " f=" << f.str() << " g=" << g.str();
        }
    }
}

TEST(Action, UqRelationsRandomized) {
    for (int n = 1; n <= 3; ++n) {
        UqAction act(n);
        RandomSource rs(200 + n);
        for (int t = 0; t < 4; ++t) {
            AlgElement f = rs.element(n, 3, 2);
            for (auto& r : verify_uq_relations(act, f)) EXPECT_TRUE(r.pass()) << r.relation << " f=" << f.str();
        }
    }
}

TEST(Action, SerreOnZ1Z2) {
    UqAction act(2);
    AlgElement f = AlgElement::z(2, 1) * AlgElement::z(2, 2);
    int count = 0;
    for (auto& r : verify_uq_relations(act, f)) {
        EXPECT_TRUE(r.pass()) << r.relation;
        if (r.relation.find("serre") != std::string::npos) ++count;
    }
    EXPECT_EQ(count, 4);
}

TEST(Action, RelationCatalogueIsComplete) {
    auto rels = uq_relations(3);
    int serre = 0, comm = 0;
    for (auto& r : rels) {
        if (r.id.find("serre") != std::string::npos) ++serre;
        if (r.id.find("comm") != std::string::npos) ++comm;
    }
    EXPECT_EQ(serre, 8);
    EXPECT_EQ(comm, 2);
}

TEST(Action, DegreeGuard) {
    UqAction act(1, 4);
    AlgElement f = AlgElement::z(1, 1).pow(5);
    EXPECT_THROW(act.apply({G::E, 1}, f), resource_error);
}

TEST(Action, GeneratorNames) {
    EXPECT_EQ(Generator::parse("Kinv2"), (G{G::Kinv, 2}));
    EXPECT_EQ(Generator::parse("E1"), (G{G::E, 1}));
    EXPECT_EQ(Generator::parse("F3").name(), "F3");
    EXPECT_THROW(Generator::parse("X1"), domain_error);
}
