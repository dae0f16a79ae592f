#include "qball/representations.hpp"

#include <gtest/gtest.h>

using namespace qball;

namespace {

std::vector<Generator> generators(int n) {
    std::vector<Generator> gs;
    for (int j = 1; j <= n; ++j)
        for (auto k : {Generator::K, Generator::Kinv, Generator::E, Generator::F}) gs.push_back({k, j});
    return gs;
}

double worst_expansion_residual(const SeriesConfig& c, int margin, int degree) {
    Representation R(c);
    auto X = build_expansion_ops(R);
    UqAction act(c.n);
    auto cols = R.basis().interior(margin);
    double worst = 0;
    for (auto& f : all_monomials(c.n, degree)) {
        SparseOp pf = R.evaluate(f);
        for (auto& g : generators(c.n)) {
            auto terms = expansion_terms(X, g, pf, c.q);
            for (auto& T : R.evaluate_terms(act.apply(g, f))) terms.push_back(-T);
            worst = std::max(worst, relative_residual(terms, cols));
        }
    }
    return worst;
}

}  // namespace

TEST(Expansion, MonomialCount) {
    EXPECT_EQ(all_monomials(1, 1).size(), 4u);
    EXPECT_EQ(all_monomials(1, 2).size(), 4u + 5u);
    for (auto& f : all_monomials(2, 3))
        for (auto& [m, p] : f.terms())
            for (int k = 0; k < 2; ++k) EXPECT_TRUE(m.I[k] == 0 || m.J[k] == 0);
}

TEST(Expansion, DiscTypeOne) {
    EXPECT_LE(worst_expansion_residual(SeriesConfig::disc_type1(0.5, 40), 6, 3), 1e-10);
}

TEST(Expansion, DiscTypeTwo) {
    EXPECT_LE(worst_expansion_residual(SeriesConfig::disc_type2(mpq_class(3, 10), 0.5, 40), 6, 3), 1e-10);
}

TEST(Expansion, BallPositiveSeries) {
    EXPECT_LE(worst_expansion_residual(SeriesConfig::make(2, 2, 0, 0, 0.5, 40), 6, 3), 1e-10);
}

TEST(Expansion, BallMixedSeries) {
    EXPECT_LE(worst_expansion_residual(SeriesConfig::make(2, 1, 0, 1, 0.5, 40, mpq_class(1, 5)), 6, 3), 1e-10);
}

TEST(Expansion, RankThreeSeries) {
    for (auto c : {SeriesConfig::make(3, 3, 0, 0, 0.5, 10), SeriesConfig::make(3, 1, 0, 2, 0.5, 8, mpq_class(1, 3))})
        EXPECT_LE(worst_expansion_residual(c, 4, 2), 1e-10) << c.label();
}

TEST(Expansion, EOnUnitVanishes) {
    Representation R(SeriesConfig::disc_type1(0.5, 20));
    auto X = build_expansion_ops(R);
    auto t = expansion_terms(X, {Generator::E, 1}, R.identity(), 0.5);
    EXPECT_LE(relative_residual(t, R.basis().interior(2)), 1e-14);
}
