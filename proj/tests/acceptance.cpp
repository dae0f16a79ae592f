#include "qball/suites.hpp"

#include <chrono>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace qball;

namespace {

const double q = 0.5;

std::string sci(double x) {
    std::ostringstream os;
    os << std::scientific << std::setprecision(2) << x;
    return os.str();
}

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
    void require(const std::vector<CheckRecord>& rs) {
        for (auto& r : rs)
            if (!r.skipped) require(r.pass, r.suite + "/" + r.check + " " + r.series + " residual " + sci(r.residual));
    }
};

std::vector<SeriesConfig> flat_series(int N) {
    std::vector<SeriesConfig> out;
    for (int n = 1; n <= 3; ++n)
        for (auto& c : all_series(n, q, N, mpq_class(1, 5)))
            if (c.l == 0) out.push_back(c);
    return out;
}

double max_residual(const std::vector<CheckRecord>& rs) {
    double m = 0;
    for (auto& r : rs) m = std::max(m, r.residual);
    return m;
}

Outcome criterion1() {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    int count = 0;
    for (int n = 1; n <= 3; ++n) {
        o.require(algebra_suite(n, 100 + n, 34));
        count += 34;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(secs <= 60, "runtime " + sci(secs) + " s");
    if (o.pass) o.detail = std::to_string(count) + " elements, n in {1,2,3}, degree <= 4, " + sci(secs) + " s";
    return o;
}

Outcome criterion2() {
    Outcome o;
    auto r = pochhammer_check(5);
    o.require(r.pass, r.check);
    if (o.pass) o.detail = "m = 0..5, both orderings";
    return o;
}

Outcome criterion3() {
    Outcome o;
    for (int n : {2, 3}) o.require(action_suite(n, 300 + n, 20));
    if (o.pass) o.detail = "modalg/modeins/modstar and sut1-sut4, 20 elements each for n = 2, 3";
    return o;
}

Outcome criterion4() {
    Outcome o;
    double worst = 0;
    for (auto cfg : {SeriesConfig::disc_type1(q, 40), SeriesConfig::make(2, 2, 0, 0, q, 40),
                     SeriesConfig::make(2, 1, 0, 1, q, 40, mpq_class(1, 5))}) {
        auto r = expansion_check(cfg, 6, 3, 1e-10);
        o.require({r});
        worst = std::max(worst, r.residual);
    }
    if (o.pass) o.detail = "disc (I), (2,0,0), (1,0,1); N = 40, margin 6; max residual " + sci(worst);
    return o;
}

Outcome criterion5() {
    Outcome o;
    double worst = 0;
    int count = 0;
    for (int n = 1; n <= 3; ++n)
        for (auto& cfg : all_series(n, q, 12, mpq_class(1, 5))) {
            auto rs = relations_suite(cfg, 4, 1e-12);
            o.require(rs);
            worst = std::max(worst, max_residual(rs));
            ++count;
        }
    if (o.pass) o.detail = std::to_string(count) + " series, N = 12; max residual " + sci(worst);
    return o;
}

Outcome criterion6() {
    Outcome o;
    double worst = 0;
    int count = 0;
    for (auto& cfg : flat_series(4)) {
        auto ctx = SpectralContext::from(cfg);
        auto X = spectral_expansion_ops(ctx);
        RandomSource rs(600 + count++);
        for (int t = 0; t < 20; ++t) {
            auto f = random_finite_element(rs, ctx);
            for (auto& g : all_generators(cfg.n))
                o.require(invariance_defect(g, f, X, q).is_zero(), "exact " + cfg.label() + " " + g.name());
        }
    }
    for (auto& cfg : flat_series(30)) {
        auto ctx = SpectralContext::from(cfg);
        Representation R(cfg);
        auto X = build_expansion_ops(R);
        RandomSource rs(650 + cfg.n);
        for (int t = 0; t < (cfg.n == 3 ? 3 : 10); ++t) {
            auto f = random_finite_element(rs, ctx);
            for (auto& g : all_generators(cfg.n)) {
                double r = invariance_residual_trace(g, f, R, X);
                worst = std::max(worst, r);
                o.require(r <= 1e-10, "trace " + cfg.label() + " " + g.name() + " " + sci(r));
            }
        }
    }
    if (o.pass)
        o.detail = std::to_string(count) + " series (m,0,k), 20 f each exact; trace mode N = 30 max residual " +
                   sci(worst);
    return o;
}

Outcome criterion7() {
    Outcome o;
    RandomSource rs(700);
    double worst = 0;
    for (auto& cfg : flat_series(8)) {
        auto ctx = SpectralContext::from(cfg);
        Representation R(cfg);
        for (int t = 0; t < 20; ++t) {
            auto f = random_finite_element(rs, ctx);
            auto a = h_trace(f, R), b = h_closed(f, q);
            double r = std::abs(a.value - b.value) / std::max(1.0, std::abs(b.value));
            worst = std::max(worst, r);
            o.require(r <= 1e-12, "trace/closed " + cfg.label());
            if (cfg.n == 1) {
                double d = std::abs(h_disc(f, q, 1e-15).value - b.value);
                worst = std::max(worst, d);
                o.require(d <= 1e-12, "disc/closed " + cfg.label());
            }
        }
    }
    auto disc2 = SeriesConfig::disc_type2(mpq_class(3, 10), q, 8);
    auto c2 = SpectralContext::from(disc2);
    for (int t = 0; t < 20; ++t) {
        auto f = random_finite_element(rs, c2);
        double d = std::abs(h_disc(f, q, 1e-15).value - h_closed(f, q).value);
        worst = std::max(worst, d);
        o.require(d <= 1e-12, "disc/closed (II)_0.3");
    }
    auto one = jackson_01([](double) { return cplx(1); }, q, 1e-17, bounded_tail(1, q));
    auto t = jackson_01([](double x) { return cplx(x); }, q, 1e-17, bounded_tail(1, q));
    o.require(std::abs(one.value - 1.0) <= 1e-14, "Jackson int 1");
    o.require(std::abs(t.value - 1 / (1 + q)) <= 1e-14, "Jackson int t");
    if (o.pass) o.detail = "max coherence error " + sci(worst) + "; Jackson identities to 1e-14";
    return o;
}

Outcome criterion8() {
    Outcome o;
    for (int n = 2; n <= 3; ++n) {
        o.require(*h_compact(AlgElement::one(n), q).exact == GridScalar(1), "h(1) n=" + std::to_string(n));
        for (auto& f : all_monomials(n, 3))
            if (!f.terms().begin()->first.is_identity())
                o.require(h_compact(f, q).exact->is_zero(), "h(" + f.str() + ") != 0");
    }
    UqAction act2(2), act3(3);
    for (auto& f : all_monomials(2, 4))
        for (auto& g : all_generators(1)) o.require(compact_invariance_defect(g, f, act2).is_zero(), "invariance " + f.str());
    RandomSource rs(800);
    for (int t = 0; t < 25; ++t) {
        AlgElement f = rs.element(3, 4, 3, true);
        for (auto& g : all_generators(2)) o.require(compact_invariance_defect(g, f, act3).is_zero(), "invariance " + f.str());
    }
    double worst = 0;
    for (auto [n, N] : {std::pair{2, 40}, std::pair{3, 20}}) {
        Representation R(SeriesConfig::make(n, n, 0, 0, q, N));
        for (int t = 0; t < 10; ++t) {
            AlgElement f = rs.element(n, 4, 3, true);
            double d = std::abs(h_compact(f, q).value - h_compact_trace(f, R).value);
            worst = std::max(worst, d);
            o.require(d <= 1e-10, "truncated trace " + f.str());
        }
        double d = std::abs(h_compact_trace(AlgElement::one(n), R).value - 1.0);
        worst = std::max(worst, d);
        o.require(d <= 1e-10, "truncated trace of 1");
    }
    if (o.pass) o.detail = "c = prod(1 - q^{2k}); truncated trace max deviation " + sci(worst);
    return o;
}

Outcome criterion9() {
    Outcome o;
    double worst = 0;
    for (auto cfg : {SeriesConfig::disc_type1(q, 24), SeriesConfig::disc_type2(mpq_class(3, 10), q, 24)}) {
        auto rs = fodc_suite(cfg, 4, 900);
        o.require(rs);
        worst = std::max(worst, max_residual(rs));
    }
    if (o.pass) o.detail = "types (I), (II)_0.3; N = 24, margin 4; max residual " + sci(worst);
    return o;
}

Outcome criterion10() {
    Outcome o;
    int count = 0;
    for (auto& cfg : flat_series(4)) {
        auto r = normalize_h(SpectralContext::from(cfg), q);
        o.require(r.divergent && !r.exact, "h(1) finite on " + cfg.label());
        ++count;
    }
    if (o.pass) o.detail = "divergence reported for h(1) on all " + std::to_string(count) + " series (m,0,k), n <= 3";
    return o;
}

}  // namespace

int main() {
    std::vector<std::pair<std::string, Outcome (*)()>> criteria{
        {"exact algebra suite", criterion1},
        {"Pochhammer identities", criterion2},
        {"module-*-algebra axioms and U_q relations", criterion3},
        {"operator-expansion consistency", criterion4},
        {"representation residuals", criterion5},
        {"invariance of h", criterion6},
        {"integral mode coherence", criterion7},
        {"normalized compact integral", criterion8},
        {"first-order differential calculus", criterion9},
        {"divergence of h(1)", criterion10},
    };
    int failed = 0;
    for (size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failed += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << k + 1 << ": " << criteria[k].first << " ("
                  << o.detail << ")" << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
