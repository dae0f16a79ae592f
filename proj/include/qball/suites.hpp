#pragma once

#include "qball/fodc.hpp"
#include "qball/integral.hpp"

namespace qball {

struct CheckRecord {
    std::string suite, check, series;
    double residual = 0;
    bool pass = true;
    bool skipped = false;
    std::string detail;
};

struct VerifyConfig {
    SeriesConfig series;
    int margin = 4;
    double tol = 1e-10;
    std::uint64_t seed = 1;
    int samples = 10;
    bool inject_fault = false;
};

namespace detail {

inline CheckRecord exact_check(const std::string& suite, const std::string& check, bool ok, std::string detail = "") {
    return {suite, check, "", ok ? 0.0 : 1.0, ok, false, std::move(detail)};
}

inline CheckRecord skipped(const std::string& suite, const std::string& why) {
    return {suite, "skipped", "", 0, true, true, why};
}

inline CheckRecord from_residual(const std::string& suite, const ResidualRecord& r) {
    return {suite, r.relation, r.series, r.residual, r.pass, false, ""};
}

}  // namespace detail

/// z^m z^{*m} = (Q_1; q^{-2})_m and z^{*m} z^m = (q^2 Q_1; q^2)_m on the disc, m <= 5.
inline CheckRecord pochhammer_check(int max_m = 5) {
    AlgElement z = AlgElement::z(1, 1), zs = AlgElement::zs(1, 1);
    bool poch = true;
    AlgElement zm = AlgElement::one(1), zsm = AlgElement::one(1);
    for (int m = 0; m <= max_m; ++m) {
        poch = poch && zm * zsm == pochhammer_Q1(1, QScalar(1), -2, m) &&
               zsm * zm == pochhammer_Q1(1, QScalar::q_pow(2), 2, m);
        zm = zm * z;
        zsm = zsm * zs;
    }
    return detail::exact_check("algebra", "pochhammer:m<=" + std::to_string(max_m), poch);
}

/// Associativity, star anti-multiplicativity, involution, render/parse idempotence, Pochhammer identities.
inline std::vector<CheckRecord> algebra_suite(int n, std::uint64_t seed, int samples) {
    using detail::exact_check;
    RandomSource rs(seed);
    std::vector<CheckRecord> out;
    int bad_assoc = 0, bad_star = 0, bad_inv = 0, bad_nf = 0;
    for (int t = 0; t < samples; ++t) {
        AlgElement a = rs.element(n, 4, 2, true), b = rs.element(n, 4, 2, true), c = rs.element(n, 4, 2, true);
        bad_assoc += !((a * b) * c == a * (b * c));
        bad_star += !((a * b).star() == b.star() * a.star());
        bad_inv += !(a.star().star() == a);
        bad_nf += !(parse_algebra(a.str(), n) == a && parse_algebra((a * b).str(), n) == a * b);
    }
    auto tag = [&](int bad) { return std::to_string(samples - bad) + "/" + std::to_string(samples); };
    out.push_back(exact_check("algebra", "associativity", bad_assoc == 0, tag(bad_assoc)));
    out.push_back(exact_check("algebra", "star-antimultiplicative", bad_star == 0, tag(bad_star)));
    out.push_back(exact_check("algebra", "star-involutive", bad_inv == 0, tag(bad_inv)));
    out.push_back(exact_check("algebra", "normal-form-idempotent", bad_nf == 0, tag(bad_nf)));

    out.push_back(pochhammer_check());
    return out;
}

/// Module-algebra axioms and defining relations of U_q(su(n,1)) acting on random elements.
inline std::vector<CheckRecord> action_suite(int n, std::uint64_t seed, int samples) {
    using detail::exact_check;
    RandomSource rs(seed);
    UqAction act(n);
    std::map<std::string, int> failures;
    std::vector<std::string> order;
    auto note = [&](const std::string& id, bool ok) {
        auto key = id.substr(0, id.find(':'));
        if (!failures.count(key)) order.push_back(key), failures[key] = 0;
        failures[key] += !ok;
    };
    for (int t = 0; t < samples; ++t) {
        AlgElement f = rs.element(n, 3, 2, true), g = rs.element(n, 3, 2, true);
        for (auto& gen : all_generators(n))
            for (auto& r : verify_module_algebra(act, f, g, gen)) note(r.relation, r.pass());
        for (auto& r : verify_uq_relations(act, f)) note(r.relation, r.pass());
    }
    std::vector<CheckRecord> out;
    for (auto& k : order)
        out.push_back(exact_check("action", k, failures[k] == 0, std::to_string(failures[k]) + " failing instances"));
    return out;
}

/// pi(X |> f) against the operator expansion on interior vectors, monomials up to the given degree.
inline CheckRecord expansion_check(const SeriesConfig& cfg, int margin, int degree, double tol) {
    if (cfg.l > 0) return detail::skipped("expansion", "operator expansion needs a series (m,0,k)");
    Representation R(cfg);
    auto X = build_expansion_ops(R);
    UqAction act(cfg.n);
    auto cols = R.basis().interior(margin);
    double worst = 0;
    for (auto& f : all_monomials(cfg.n, degree)) {
        SparseOp pf = R.evaluate(f);
        for (auto& g : all_generators(cfg.n)) {
            auto terms = expansion_terms(X, g, pf, cfg.q);
            for (auto& T : R.evaluate_terms(act.apply(g, f))) terms.push_back(-T);
            worst = std::max(worst, relative_residual(terms, cols));
        }
    }
    return {"expansion", "pi(X|>f)=expansion", cfg.label(), worst, worst <= tol, false,
            "degree<=" + std::to_string(degree)};
}

inline std::vector<CheckRecord> relations_suite(const SeriesConfig& cfg, int margin, double tol) {
    std::vector<CheckRecord> out;
    Representation R(cfg);
    for (auto& r : verify_relations(R, margin, tol)) out.push_back(detail::from_residual("relations", r));
    for (auto [name, form] : {std::pair{"qhyp:I", QHypForm{QHypForm::I}}, {"qhyp:II", QHypForm{QHypForm::II, 0.7}},
                              {"qhyp:III", QHypForm{QHypForm::III, 1, 0.4}}, {"qhyp:minus", QHypForm{QHypForm::Minus}}}) {
        double r = qhyp_residual(form, cfg.q, cfg.N, margin);
        out.push_back({"relations", name, "", r, r <= tol, false, ""});
    }
    return out;
}

inline std::vector<CheckRecord> invariance_suite(const SeriesConfig& cfg, std::uint64_t seed, int samples,
                                                 double tol) {
    using detail::exact_check;
    std::vector<CheckRecord> out;
    if (cfg.l > 0) {
        out.push_back(detail::skipped("invariance", "the spectral integral is defined on series (m,0,k)"));
        return out;
    }
    auto ctx = SpectralContext::from(cfg);
    auto X = spectral_expansion_ops(ctx);
    RandomSource rs(seed);
    int bad = 0, total = 0;
    std::vector<SpectralElement> fs;
    for (int t = 0; t < samples; ++t) fs.push_back(random_finite_element(rs, ctx));
    for (auto& f : fs)
        for (auto& g : all_generators(cfg.n)) {
            bad += !invariance_defect(g, f, X, cfg.q).is_zero();
            ++total;
        }
    out.push_back(exact_check("invariance", "exact:h(X|>f)=eps(X)h(f)", bad == 0,
                              std::to_string(total - bad) + "/" + std::to_string(total)));
    out.back().series = cfg.label();

    Representation R(cfg);
    auto Xn = build_expansion_ops(R);
    double worst = 0;
    for (auto& f : fs)
        for (auto& g : all_generators(cfg.n)) worst = std::max(worst, invariance_residual_trace(g, f, R, Xn));
    out.push_back({"invariance", "trace:h(X|>f)=eps(X)h(f)", cfg.label(), worst, worst <= tol, false,
                   "N=" + std::to_string(cfg.N)});

    double coh = 0;
    for (auto& f : fs) {
        auto a = h_trace(f, R), b = h_closed(f, cfg.q);
        coh = std::max(coh, std::abs(a.value - b.value) / std::max(1.0, std::abs(b.value)));
        if (cfg.n == 1) coh = std::max(coh, std::abs(h_disc(f, cfg.q, 1e-15).value - b.value) / std::max(1.0, std::abs(b.value)));
    }
    out.push_back({"invariance", cfg.n == 1 ? "coherence:trace,disc,closed" : "coherence:trace,closed", cfg.label(),
                   coh, coh <= 1e-12, false, ""});

    auto h1 = normalize_h(ctx, cfg.q);
    out.push_back(exact_check("invariance", "divergence:h(1)", h1.divergent, h1.note));

    if (cfg.m == cfg.n && cfg.n >= 2) {
        UqAction act(cfg.n);
        int cbad = 0;
        for (int t = 0; t < samples; ++t) {
            AlgElement f = rs.element(cfg.n, 4, 3, true);
            for (auto& g : all_generators(cfg.n - 1)) cbad += !compact_invariance_defect(g, f, act).is_zero();
        }
        out.push_back(exact_check("invariance", "compact:U_q(su(n))", cbad == 0));
        out.push_back(exact_check("invariance", "compact:h(1)=1",
                                  *h_compact(AlgElement::one(cfg.n), cfg.q).exact == GridScalar(1)));
    }
    return out;
}

inline std::vector<CheckRecord> fodc_suite(const SeriesConfig& cfg, int margin, std::uint64_t seed) {
    std::vector<CheckRecord> out;
    if (cfg.n != 1 || cfg.l > 0) {
        out.push_back(detail::skipped("fodc", "the commutator calculus is built on disc types (I) and (II)"));
        return out;
    }
    auto K = build_calculus(cfg);
    for (auto& r : verify_bimodule(K, margin, 1e-12, seed)) out.push_back(detail::from_residual("fodc", r));
    auto ctx = SpectralContext::from(cfg);
    double worst = 0;
    std::vector<SpectralFn> psis{SpectralFn::embed(ctx, AlgElement::Q(1, 1).p00()), SpectralFn(ctx, QScalar(1))};
    for (int k = cfg.k == 0 ? 0 : -3; k <= 5; ++k) psis.push_back(SpectralFn::delta(ctx, {k}));
    for (auto& psi : psis) worst = std::max(worst, verify_dpsi(K, psi, margin).residual);
    out.push_back({"fodc", "d(psi)", cfg.label(), worst, worst <= 1e-12, false, "psi in {t, 1, delta_k}"});
    return out;
}

/// Disc relation zQQ checked against a representation built at a perturbed q; must fail.
inline CheckRecord fault_check(const SeriesConfig& cfg, int margin, double tol) {
    Representation R(SeriesConfig::disc_type1(cfg.q * 1.05, cfg.N));
    const double q2 = cfg.q * cfg.q;
    SparseOp zsz = R.zs(1) * R.z(1), zzs = R.z(1) * R.zs(1);
    double r = relative_residual({zsz, SparseOp(-q2 * zzs), SparseOp(-(1 - q2) * R.identity())},
                                 R.basis().interior(margin));
    return {"fault", "injected:zQQ", "(1,0,0)", r, r <= tol, false, "representation built at 1.05 q"};
}

inline std::vector<CheckRecord> run_suite(const std::string& suite, const VerifyConfig& v) {
    std::vector<CheckRecord> out;
    auto add = [&](std::vector<CheckRecord> r) { out.insert(out.end(), r.begin(), r.end()); };
    const auto& c = v.series;
    bool all = suite == "all";
    if (all || suite == "algebra") add(algebra_suite(c.n, v.seed, v.samples));
    if (all || suite == "action") {
        add(action_suite(c.n, v.seed, v.samples));
        out.push_back(expansion_check(c, v.margin, c.n >= 3 ? 2 : 3, v.tol));
    }
    if (all || suite == "relations") add(relations_suite(c, v.margin, std::min(v.tol, 1e-12)));
    if (all || suite == "invariance") add(invariance_suite(c, v.seed, v.samples, v.tol));
    if (all || suite == "fodc") add(fodc_suite(c, v.margin, v.seed));
    if (v.inject_fault) out.push_back(fault_check(c, v.margin, v.tol));
    return out;
}

}  // namespace qball
