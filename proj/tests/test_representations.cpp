#include "qball/random.hpp"
#include "qball/representations.hpp"

#include <gtest/gtest.h>

using namespace qball;

namespace {

double at(const SparseOp& M, const Basis& b, std::vector<int> row, std::vector<int> col) {
    return std::abs(M.coeff(b.flat(row), b.flat(col)));
}

}  // namespace

TEST(Representations, DiscTypeOneShift) {
    Representation R(SeriesConfig::disc_type1(0.5, 12));
    EXPECT_NEAR(at(R.z(1), R.basis(), {1}, {0}), 0.8660254037844386, 1e-15);
    EXPECT_EQ(R.dim(), 13);
}

TEST(Representations, DiscTypeTwoShift) {
    Representation R(SeriesConfig::disc_type2(mpq_class(3, 10), 0.5, 12));
    EXPECT_NEAR(at(R.zs(1), R.basis(), {1}, {0}), std::sqrt(1 + std::pow(0.5, 0.6)), 1e-15);
    EXPECT_NEAR(R.Qdiag(1)[R.basis().flat({0})], -std::pow(0.5, 0.6), 1e-15);
    EXPECT_EQ(R.dim(), 25);
}

TEST(Representations, NullBlockVanishes) {
    Representation R(SeriesConfig::make(3, 0, 3, 0));
    EXPECT_EQ(R.z(1).nonZeros(), 0);
    EXPECT_EQ(R.z(2).nonZeros(), 0);
    EXPECT_EQ(R.dim(), 1);
    Representation S(SeriesConfig::make(3, 1, 1, 1));
    for (int f = 0; f < S.dim(); ++f) EXPECT_EQ(S.Qdiag(2)[f], 0.0);
}

TEST(Representations, QEigenvalues) {
    auto c = SeriesConfig::make(2, 2, 0, 0);
    Representation R(c);
    int f = R.basis().flat({2, 3});
    EXPECT_NEAR(R.Qdiag(1)[f], std::pow(0.5, 10), 1e-18);
    EXPECT_NEAR(R.Qdiag(2)[f], std::pow(0.5, 6), 1e-18);
    EXPECT_EQ(R.Qdiag(3)[f], 1.0);
    Representation S(SeriesConfig::make(2, 1, 0, 1, 0.5, 12, mpq_class(1, 4)));
    int g = S.basis().flat({-2, 1});
    EXPECT_NEAR(S.Qdiag(1)[g], -std::pow(0.5, 4 + 2) * std::pow(0.5, 1.0), 1e-15);
}

TEST(Representations, Validation) {
    EXPECT_THROW(SeriesConfig::make(2, 1, 0, 0), domain_error);
    EXPECT_THROW(SeriesConfig::make(1, 0, 0, 1, 0.5, 12, mpq_class(1, 2)), domain_error);
    EXPECT_THROW(SeriesConfig::make(1, 1, 0, 0, 1.5), domain_error);
}

TEST(Representations, InteriorWindows) {
    Basis b(SeriesConfig::disc_type1(0.5, 12));
    auto in = b.interior(4);
    ASSERT_EQ(in.size(), 9u);
    EXPECT_EQ(b.index(in.front())[0], 0);
    EXPECT_EQ(b.index(in.back())[0], 8);
    EXPECT_EQ(b.interior(0).size(), 13u);
    EXPECT_TRUE(b.interior(13).empty());
    Basis c(SeriesConfig::disc_type2(mpq_class(1, 2)));
    EXPECT_EQ(c.interior(4).size(), 17u);
}

TEST(Representations, EvaluateBasics) {
    Representation R(SeriesConfig::disc_type1(0.5, 12));
    auto cols = R.basis().interior(2);
    EXPECT_EQ(relative_residual({R.evaluate(AlgElement::one(1)), -R.identity()}, cols), 0);
    auto z = AlgElement::z(1, 1);
    EXPECT_LE(relative_residual({R.evaluate(z * z.star()), -R.evaluate(AlgElement::one(1) - AlgElement::Q(1, 1))}, cols),
              1e-14);
}

TEST(Representations, AllRelationsAllSeries) {
    for (int n = 1; n <= 3; ++n)
        for (auto& c : all_series(n)) {
            Representation R(c);
            for (auto& r : verify_relations(R, 4))
                EXPECT_TRUE(r.pass) << r.relation << " " << r.series << " residual " << r.residual;
        }
}

TEST(Representations, NegativeSeriesRelationsAtSeveralAlphas) {
    for (auto a : {mpq_class(0), mpq_class(1, 3), mpq_class(9, 20)})
        for (auto& c : std::vector{SeriesConfig::make(2, 0, 0, 2, 0.3, 10, a), SeriesConfig::make(3, 1, 0, 2, 0.7, 8, a)}) {
            Representation R(c);
            for (auto& r : verify_relations(R, 4)) EXPECT_TRUE(r.pass) << r.relation << " " << r.series;
        }
}

TEST(Representations, EvaluateIsMultiplicative) {
    RandomSource rs(77);
    for (int n = 1; n <= 2; ++n)
        for (auto& c : all_series(n, 0.5, 12)) {
            Representation R(c);
            auto cols = R.basis().interior(6);
            for (int t = 0; t < 5; ++t) {
                auto f = rs.element(n, 3, 2, true), g = rs.element(n, 3, 2, true);
                EXPECT_LE(relative_residual({R.evaluate(f * g), -R.evaluate(f) * R.evaluate(g)}, cols), 1e-11)
                    << c.label() << " " << f.str() << " | " << g.str();
                EXPECT_LE(relative_residual({R.evaluate(f.star()), -adjoint(R.evaluate(f))}, cols), 1e-11)
                    << c.label() << " " << f.str();
            }
        }
}

TEST(Representations, DiscGammaIsInverseY) {
    Representation R(SeriesConfig::disc_type1(0.5, 12));
    auto X = build_expansion_ops(R);
    for (int i = 0; i <= 12; ++i) EXPECT_NEAR(std::abs(X.Gamma.coeff(i, i)), std::pow(0.5, -2 * i), 1e-9);
    EXPECT_THROW(build_expansion_ops(Representation(SeriesConfig::make(2, 1, 1, 0))), unsupported_series);
}

TEST(Representations, QHyperbolicForms) {
    for (double q : {0.3, 0.5, 0.8}) {
        EXPECT_LE(qhyp_residual({QHypForm::I}, q, 20, 2), 1e-12);
        EXPECT_LE(qhyp_residual({QHypForm::II, 0.95}, q, 20, 2), 1e-12);
        EXPECT_LE(qhyp_residual({QHypForm::II, q * q * 1.01}, q, 20, 2), 1e-12);
        EXPECT_EQ(qhyp_residual({QHypForm::III, 1, 0.7}, q, 20, 0), 0);
        EXPECT_LE(qhyp_residual({QHypForm::Minus}, q, 20, 2), 1e-12);
    }
    EXPECT_THROW(build_qhyp({QHypForm::II, 0.1}, 0.5, 10), domain_error);
    auto op = build_qhyp({QHypForm::I}, 0.5, 5);
    EXPECT_NEAR(std::abs(op.x.coeff(2, 3)), std::sqrt(1 - std::pow(0.5, 6)), 1e-15);
}

TEST(Representations, WrongEpsilonIsDetected) {
    QHypForm f{QHypForm::Minus};
    auto op = build_qhyp(f, 0.5, 10);
    SparseOp xs = adjoint(op.x), I = identity_op(10);
    EXPECT_GT(relative_residual({op.x * xs, -0.25 * xs * op.x, -0.75 * I}, op.interior(2)), 0.1);
}
