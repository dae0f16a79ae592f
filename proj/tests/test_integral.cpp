#include "qball/integral.hpp"

#include <gtest/gtest.h>

using namespace qball;

namespace {

const double q = 0.5;

std::vector<SeriesConfig> flat_series(int max_n, int N) {
    std::vector<SeriesConfig> out;
    for (int n = 1; n <= max_n; ++n)
        for (auto& c : all_series(n, q, N, mpq_class(1, 5)))
            if (c.l == 0) out.push_back(c);
    return out;
}

double geometric(double x) { return 1 / (1 - x); }

}  // namespace

TEST(Integral, ClosedExamples) {
    auto c1 = SpectralContext::from(SeriesConfig::disc_type1(q, 10));
    auto d0 = SpectralElement(c1, SpectralFn::delta(c1, {0}));
    EXPECT_EQ(*h_closed(d0, q, QScalar(3)).exact, GridScalar(3));
    EXPECT_EQ(*h_closed(d0, q).exact, GridScalar(1));
    auto d2 = SpectralElement(c1, SpectralFn::delta(c1, {2}));
    EXPECT_EQ(*h_closed(d2, q).exact, GridScalar(QScalar::q_pow(-4)));
    EXPECT_TRUE(h_closed(SpectralElement::z(c1, 1) * d2, q).exact->is_zero());

    auto c2 = SpectralContext::from(SeriesConfig::disc_type2(mpq_class(3, 10), q, 10));
    auto e0 = SpectralElement(c2, SpectralFn::delta(c2, {0}));
    EXPECT_EQ(*h_closed(e0, q, QScalar(3)).exact, GridScalar::A_pow(-2, 3));
    EXPECT_NEAR(h_closed(e0, q).value.real(), std::pow(q, -0.6), 1e-14);
}

TEST(Integral, TraceExamples) {
    auto cfg = SeriesConfig::disc_type1(q, 6);
    Representation R(cfg);
    auto ctx = SpectralContext::from(cfg);
    auto r0 = h_trace(SpectralElement(ctx, SpectralFn::delta(ctx, {0})), R, QScalar(7));
    EXPECT_NEAR(std::abs(r0.value - 7.0), 0.0, 1e-14);
    EXPECT_EQ(r0.tail_bound, 0.0);
    auto r2 = h_trace(SpectralElement(ctx, SpectralFn::delta(ctx, {2})), R);
    EXPECT_NEAR(r2.value.real(), 16.0, 1e-13);
}

TEST(Integral, PolynomialWeightedSum) {
    auto ctx = SpectralContext::from(SeriesConfig::disc_type1(q, 10));
    auto t2 = SpectralElement::embed(ctx, AlgElement::Q(1, 1) * AlgElement::Q(1, 1));
    auto r = h_closed(t2, q, QScalar(5));
    EXPECT_FALSE(r.divergent);
    EXPECT_EQ(*r.exact, GridScalar(QScalar(5) * (QScalar(1) - QScalar::q_pow(2)).inverse()));
    auto d = h_disc(t2, q, 1e-15, QScalar(5));
    EXPECT_NEAR(std::abs(d.value - r.value), 0.0, 1e-12);
    EXPECT_LE(d.tail_bound, 1e-14);

    RapidFn psi{[](const Exps& i) { return cplx(std::pow(q, 4 * i[0])); },
                [](int K) { return std::pow(q, 2 * (K + 1)) / (1 - q * q); }};
    auto rr = h_closed(ctx, psi, q, 1e-14);
    EXPECT_NEAR(rr.value.real(), 1 / (1 - q * q), 1e-13);
    EXPECT_LE(rr.tail_bound, 1e-14);
}

TEST(Integral, TraceAgreesWithClosed) {
    RandomSource rs(404);
    for (auto& cfg : flat_series(3, 8)) {
        auto ctx = SpectralContext::from(cfg);
        Representation R(cfg);
        for (int t = 0; t < 20; ++t) {
            auto f = random_finite_element(rs, ctx);
            auto a = h_trace(f, R), b = h_closed(f, q);
            ASSERT_FALSE(b.divergent);
            EXPECT_LE(std::abs(a.value - b.value), 1e-12 * std::max(1.0, std::abs(b.value)))
                << cfg.label() << " " << f.str();
            EXPECT_EQ(a.tail_bound, 0.0);
        }
    }
}

TEST(Integral, DiscJacksonAgreesWithClosed) {
    RandomSource rs(9);
    for (auto cfg : {SeriesConfig::disc_type1(q, 10), SeriesConfig::disc_type2(mpq_class(3, 10), q, 10)}) {
        auto ctx = SpectralContext::from(cfg);
        for (int t = 0; t < 20; ++t) {
            auto f = random_finite_element(rs, ctx);
            auto a = h_disc(f, q, 1e-15), b = h_closed(f, q);
            EXPECT_LE(std::abs(a.value - b.value), 1e-12) << f.str();
        }
        auto d0 = SpectralElement(ctx, SpectralFn::delta(ctx, {0}));
        EXPECT_NEAR(std::abs(h_disc(d0, q, 1e-15, QScalar(2)).value - h_closed(d0, q, QScalar(2)).value), 0.0, 1e-14);
    }
    auto c2 = SpectralContext::from(SeriesConfig::disc_type2(mpq_class(3, 10), q, 10));
    EXPECT_THROW(h_disc(SpectralElement::scalar(c2, 1), q, 1e-12), divergence_error);
}

TEST(Integral, JacksonIdentities) {
    const double p = q;
    auto one = jackson_01([](double) { return cplx(1); }, p, 1e-17, bounded_tail(1, p));
    EXPECT_NEAR(one.value.real(), 1.0, 1e-14);
    auto t = jackson_01([](double x) { return cplx(x); }, p, 1e-17, bounded_tail(1, p));
    EXPECT_NEAR(t.value.real(), 1 / (1 + q), 1e-14);
    auto t2 = jackson_01([](double x) { return cplx(x * x); }, p, 1e-17, bounded_tail(1, p));
    EXPECT_NEAR(t2.value.real(), 1 / (1 + q + q * q), 1e-14);

    auto phi = [](double x) { return cplx(x <= 1 ? x * x : 1 / (x * x)); };
    auto tail = [p](int K) { return std::pow(p, K + 1) / (1 - p); };
    auto r = jackson_0inf(phi, p, 1e-17, tail);
    EXPECT_NEAR(r.value.real(), (1 - p) * (geometric(p * p * p) + p * geometric(p)), 1e-14);
    EXPECT_THROW(jackson_01([](double) { return cplx(1); }, p, 1e-12, [](int) { return 1.0; }, 50),
                 divergence_error);
}

TEST(Integral, CompactNormalization) {
    for (int n = 2; n <= 3; ++n) {
        EXPECT_EQ(*h_compact(AlgElement::one(n), q).exact, GridScalar(1));
        for (auto& f : all_monomials(n, 3)) {
            auto& m = f.terms().begin()->first;
            if (!m.is_identity()) {
                EXPECT_TRUE(h_compact(f, q).exact->is_zero()) << f.str();
            }
        }
    }
    QScalar expect = (QScalar(1) - QScalar::q_pow(2)) * (QScalar(1) - QScalar::q_pow(6)).inverse();
    EXPECT_EQ(*h_compact(AlgElement::Q(2, 1), q).exact, GridScalar(expect));
    EXPECT_THROW(h_compact(AlgElement::one(1), q), domain_error);
}

TEST(Integral, CompactAgreesWithTruncatedTrace) {
    RandomSource rs(17);
    for (auto [n, N] : {std::pair{2, 40}, std::pair{3, 20}}) {
        Representation R(SeriesConfig::make(n, n, 0, 0, q, N));
        for (int t = 0; t < 10; ++t) {
            AlgElement f = rs.element(n, 4, 3, true);
            auto a = h_compact(f, q), b = h_compact_trace(f, R);
            EXPECT_LE(std::abs(a.value - b.value), 1e-10) << f.str();
            EXPECT_LE(b.tail_bound, 1e-10);
        }
        EXPECT_NEAR(h_compact_trace(AlgElement::one(n), R).value.real(), 1.0, 1e-10);
    }
}

TEST(Integral, CompactInvarianceExact) {
    UqAction act2(2), act3(3);
    for (auto& f : all_monomials(2, 4))
        for (auto& g : all_generators(1)) EXPECT_TRUE(compact_invariance_defect(g, f, act2).is_zero()) << f.str();
    RandomSource rs(23);
    for (int t = 0; t < 25; ++t) {
        AlgElement f = rs.element(3, 4, 3, true);
        for (auto& g : all_generators(2)) EXPECT_TRUE(compact_invariance_defect(g, f, act3).is_zero()) << f.str();
    }
    EXPECT_THROW(compact_invariance_defect({Generator::F, 2}, AlgElement::one(2), act2), domain_error);
}

TEST(Integral, InvarianceExact) {
    RandomSource rs(2718);
    for (auto& cfg : flat_series(3, 4)) {
        auto ctx = SpectralContext::from(cfg);
        auto X = spectral_expansion_ops(ctx);
        for (int t = 0; t < 20; ++t) {
            auto f = random_finite_element(rs, ctx);
            for (auto& g : all_generators(cfg.n))
                EXPECT_TRUE(invariance_defect(g, f, X).is_zero()) << cfg.label() << " " << g.name() << " " << f.str();
        }
    }
}

TEST(Integral, InvarianceSpecExamples) {
    auto ctx = SpectralContext::from(SeriesConfig::disc_type1(q, 10));
    auto X = spectral_expansion_ops(ctx);
    auto d0 = SpectralElement(ctx, SpectralFn::delta(ctx, {0}));
    EXPECT_TRUE(invariance_defect({Generator::K, 1}, d0, X).is_zero());
    EXPECT_FALSE(h_closed(act_expansion({Generator::E, 1}, SpectralElement::zs(ctx, 1) * d0, X), q).divergent);
    EXPECT_TRUE(invariance_defect({Generator::E, 1}, SpectralElement::z(ctx, 1) * d0, X).is_zero());
}

TEST(Integral, InvarianceTraceMode) {
    RandomSource rs(31);
    for (auto& cfg : flat_series(3, 30)) {
        auto ctx = SpectralContext::from(cfg);
        Representation R(cfg);
        auto X = build_expansion_ops(R);
        for (int t = 0; t < (cfg.n == 3 ? 2 : 5); ++t) {
            auto f = random_finite_element(rs, ctx);
            for (auto& g : all_generators(cfg.n))
                EXPECT_LE(invariance_residual_trace(g, f, R, X), 1e-10) << cfg.label() << " " << g.name();
        }
    }
}

TEST(Integral, Positivity) {
    RandomSource rs(55);
    for (auto cfg : {SeriesConfig::disc_type1(q, 8), SeriesConfig::make(2, 2, 0, 0, q, 8),
                     SeriesConfig::make(3, 3, 0, 0, q, 6)}) {
        auto ctx = SpectralContext::from(cfg);
        for (int t = 0; t < 10; ++t) {
            auto f = random_finite_element(rs, ctx);
            auto h = h_closed(f.star() * f, q);
            EXPECT_GE(h.value.real(), -1e-12);
            EXPECT_NEAR(h.value.imag(), 0.0, 1e-9 * std::max(1.0, h.value.real()));
        }
    }
}

TEST(Integral, NoNormalizedIntegral) {
    for (auto& cfg : flat_series(3, 4)) {
        auto r = normalize_h(SpectralContext::from(cfg), q);
        EXPECT_TRUE(r.divergent) << cfg.label();
        EXPECT_FALSE(r.exact.has_value());
    }
}
