#pragma once

#include "qball/spectral.hpp"

namespace qball {

/// Commutator calculus d(x) = i[C, x] on the doubled disc representation.
class CalculusRep {
public:
    explicit CalculusRep(const SeriesConfig& cfg) : R_(check(cfg)) {
        const int n = R_.dim();
        const double s = 1 / (1 - cfg.q * cfg.q);
        std::vector<Eigen::Triplet<cplx>> t;
        for (int k = 0; k < R_.z(1).outerSize(); ++k)
            for (SparseOp::InnerIterator it(R_.z(1), k); it; ++it) {
                t.emplace_back(it.row(), n + it.col(), s * it.value());
                t.emplace_back(n + it.col(), it.row(), s * std::conj(it.value()));
            }
        C_ = SparseOp(2 * n, 2 * n);
        C_.setFromTriplets(t.begin(), t.end());
    }

    const Representation& rep() const { return R_; }
    const SeriesConfig& config() const { return R_.config(); }
    const SparseOp& C() const { return C_; }
    int dim() const { return 2 * R_.dim(); }

    /// X (+) X.
    SparseOp lift(const SparseOp& X) const {
        const int n = R_.dim();
        std::vector<Eigen::Triplet<cplx>> t;
        for (int k = 0; k < X.outerSize(); ++k)
            for (SparseOp::InnerIterator it(X, k); it; ++it) {
                t.emplace_back(it.row(), it.col(), it.value());
                t.emplace_back(n + it.row(), n + it.col(), it.value());
            }
        SparseOp r(2 * n, 2 * n);
        r.setFromTriplets(t.begin(), t.end());
        return r;
    }
    SparseOp rho(const AlgElement& f) const { return lift(R_.evaluate(f)); }
    SparseOp rho(const SpectralElement& f) const { return lift(evaluate(R_, f)); }
    SparseOp rho(const SpectralFn& f) const { return lift(evaluate(R_, f)); }

    /// i C X and -i X C.
    std::vector<SparseOp> d_terms(const SparseOp& X) const {
        const cplx I(0, 1);
        return {SparseOp(I * (C_ * X)), SparseOp(-I * (X * C_))};
    }
    SparseOp d(const SparseOp& X) const {
        auto t = d_terms(X);
        return SparseOp(t[0] + t[1]);
    }
    SparseOp d(const AlgElement& f) const { return d(rho(f)); }
    SparseOp d(const SpectralElement& f) const { return d(rho(f)); }

    std::vector<int> interior(int margin) const {
        auto base = R_.basis().interior(margin);
        std::vector<int> out(base);
        for (int c : base) out.push_back(c + R_.dim());
        return out;
    }

private:
    static SeriesConfig check(const SeriesConfig& cfg) {
        if (cfg.n != 1) throw unsupported_series("the commutator calculus is defined for the disc only");
        return cfg;
    }

    Representation R_;
    SparseOp C_;
};

inline CalculusRep build_calculus(const SeriesConfig& cfg) { return CalculusRep(cfg); }

/// D_b psi(t) = (psi(t) - psi(b t)) / ((1 - b) t) in the variable t = Q_1, b = q^{base_power}.
inline SpectralFn q_derivative(const SpectralFn& psi, int base_power = 2) {
    const auto& ctx = psi.context();
    if (!ctx) return psi;
    if (ctx->n != 1) throw domain_error("q_derivative acts on functions of Q_1 (n = 1)");
    SpectralFn moved(ctx);
    if (base_power == 2) {
        moved = psi.shifted(1, 1);
    } else if (base_power == 1) {
        if (!psi.finite().empty()) throw domain_error("the grid is not closed under t -> q t");
        PowerSum p(1);
        for (auto& [e, c] : psi.powers().terms()) p.add(e, c.times_s(e[0]));
        moved = SpectralFn::power(ctx, p);
    } else {
        throw domain_error("q_derivative base must be q or q^2");
    }
    QScalar scale = (QScalar(1) - QScalar::q_pow(base_power)).inverse() * QScalar(ctx->eps(1));
    SpectralFn inv_t = SpectralFn::power(ctx, PowerSum::monomial(1, {-2}, scale));
    return (psi - moved) * inv_t;
}

namespace detail {

inline std::vector<SparseOp> sandwich(const std::vector<SparseOp>& left, const std::vector<SparseOp>& mid,
                                      const std::vector<SparseOp>& right, cplx scale = 1) {
    std::vector<SparseOp> out;
    for (auto& a : left)
        for (auto& b : mid)
            for (auto& c : right) out.push_back(SparseOp(scale * (a * b * c)));
    return out;
}

inline std::vector<SparseOp> lifted_terms(const CalculusRep& K, const AlgElement& f) {
    std::vector<SparseOp> out;
    for (auto& T : K.rep().evaluate_terms(f)) out.push_back(K.lift(T));
    if (out.empty()) out.push_back(SparseOp(K.dim(), K.dim()));
    return out;
}

inline std::vector<SparseOp> d_all(const CalculusRep& K, const std::vector<SparseOp>& xs) {
    std::vector<SparseOp> out;
    for (auto& x : xs)
        for (auto& t : K.d_terms(x)) out.push_back(t);
    return out;
}

inline std::vector<SparseOp> concat(std::vector<SparseOp> a, const std::vector<SparseOp>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace detail

/// Bimodule relations, C = C^+, Leibniz and d(f)^+ = d(f^*) on interior vectors.
inline std::vector<ResidualRecord> verify_bimodule(const CalculusRep& K, int margin, double tol = 1e-12,
                                                   std::uint64_t seed = 1, int pairs = 12) {
    using detail::concat, detail::d_all, detail::lifted_terms, detail::sandwich;
    const auto& cfg = K.config();
    auto cols = K.interior(margin);
    std::vector<ResidualRecord> out;
    auto record = [&](const std::string& name, const std::vector<SparseOp>& terms) {
        double r = relative_residual(terms, cols);
        out.push_back({name, cfg.label(), cfg.N, margin, r, r <= tol});
    };
    const SparseOp one = K.lift(K.rep().identity());
    SparseOp z = K.lift(K.rep().z(1)), zs = K.lift(K.rep().zs(1));
    auto dz = K.d_terms(z), dzs = K.d_terms(zs);
    const double q = cfg.q;
    record("dz.z", concat(sandwich({one}, dz, {z}), sandwich({z}, dz, {one}, -q * q)));
    record("dz.z*", concat(sandwich({one}, dz, {zs}), sandwich({zs}, dz, {one}, -1 / (q * q))));
    record("dz*.z", concat(sandwich({one}, dzs, {z}), sandwich({z}, dzs, {one}, -q * q)));
    record("dz*.z*", concat(sandwich({one}, dzs, {zs}), sandwich({zs}, dzs, {one}, -1 / (q * q))));
    record("C=C+", {K.C(), SparseOp(-adjoint(K.C()))});

    RandomSource rs(seed);
    double worst_leibniz = 0, worst_star = 0;
    for (int t = 0; t < pairs; ++t) {
        AlgElement f = rs.element(1, 3, 2, true), g = rs.element(1, 3, 2, true);
        auto F = lifted_terms(K, f), G = lifted_terms(K, g);
        auto terms = d_all(K, lifted_terms(K, f * g));
        terms = concat(terms, sandwich(F, d_all(K, G), {one}, -1));
        terms = concat(terms, sandwich({one}, d_all(K, F), G, -1));
        worst_leibniz = std::max(worst_leibniz, relative_residual(terms, cols));

        std::vector<SparseOp> st;
        for (auto& T : d_all(K, F)) st.push_back(adjoint(T));
        for (auto& T : d_all(K, lifted_terms(K, f.star()))) st.push_back(-T);
        worst_star = std::max(worst_star, relative_residual(st, cols));
    }
    out.push_back({"leibniz", cfg.label(), cfg.N, margin, worst_leibniz, worst_leibniz <= tol});
    out.push_back({"d(f)+=d(f*)", cfg.label(), cfg.N, margin, worst_star, worst_star <= tol});
    return out;
}

/// Terms of d(psi) + rho(z) D psi d(z^*) + q^{-2} D psi rho(z^*) d(z).
inline std::vector<SparseOp> dpsi_terms(const CalculusRep& K, const SpectralFn& psi) {
    using detail::concat, detail::sandwich;
    const double q = K.config().q;
    SparseOp P = K.rho(psi), D = K.rho(q_derivative(psi, 2));
    SparseOp z = K.lift(K.rep().z(1)), zs = K.lift(K.rep().zs(1));
    auto terms = K.d_terms(P);
    terms = concat(terms, sandwich({SparseOp(z * D)}, K.d_terms(zs), {K.lift(K.rep().identity())}));
    terms = concat(terms, sandwich({SparseOp(D * zs)}, K.d_terms(z), {K.lift(K.rep().identity())}, 1 / (q * q)));
    return terms;
}

inline ResidualRecord verify_dpsi(const CalculusRep& K, const SpectralFn& psi, int margin, double tol = 1e-12) {
    double r = relative_residual(dpsi_terms(K, psi), K.interior(margin));
    return {"d(psi)", K.config().label(), K.config().N, margin, r, r <= tol};
}

}  // namespace qball
