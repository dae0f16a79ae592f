#pragma once

#include "qball/spectral.hpp"

#include <functional>

namespace qball {

class divergence_error : public domain_error {
public:
    using domain_error::domain_error;
};

struct IntegralResult {
    std::string mode;                 // closed | trace | jackson | compact
    std::optional<GridScalar> exact;  // set for exact sums
    cplx value = 0;
    QScalar c{1};
    double tail_bound = 0;
    bool divergent = false;
    std::string series, note;

    std::string exact_str(const mpq_class& alpha) const {
        if (!exact) return "";
        if (auto v = exact->as_qscalar(alpha)) return v->str();
        return exact->str();
    }
};

/// Bound on the part of a sum beyond cutoff K.
using TailBound = std::function<double(int)>;

/// Rapid-decay spectral function: pointwise values plus a bound on sum_{outside box K} |psi w|.
struct RapidFn {
    std::function<cplx(const Exps&)> value;
    TailBound tail;
};

namespace detail {

inline PowerSum gamma_weight(const SpectralContext& ctx) {
    Exps g(ctx.n, 2);
    g[0] = -2 * ctx.n;
    return PowerSum::monomial(ctx.n, g);
}

/// Exact sum of a power-sum monomial over the spectrum, or nullopt if it diverges.
inline std::optional<GridScalar> grid_sum(const SpectralContext& ctx, const Exps& e, const QScalar& coef) {
    auto rate = ctx.rates(e);
    QScalar s = coef;
    for (int d = 1; d <= ctx.n; ++d) {
        int c = rate[d - 1];
        if (d == ctx.k || c <= 0) return std::nullopt;
        QScalar geo = (QScalar(1) - QScalar::s_pow(2 * c)).inverse();
        s *= d < ctx.k ? QScalar::s_pow(2 * c) * geo : geo;
    }
    return GridScalar::A_pow(ctx.a_degree(e), s);
}

inline double ctx_A(const SpectralContext& ctx, double q) { return std::pow(q, 2 * ctx.alpha.get_d()); }

/// Visits every valid spectral point inside the Basis window of the series at cutoff N.
template <class Fn>
void for_window(const SpectralContext& ctx, int N, Fn&& fn) {
    Basis B(ctx.config(0.5, N));
    for (int f = 0; f < B.dim(); ++f) fn(B.index(f));
}

}  // namespace detail

/// h(f) = c sum_{t in M_0} psi_00(t) |t_1|^{-n}|t_2|...|t_n|, exact.
inline IntegralResult h_closed(const SpectralElement& f, double q, const QScalar& c = QScalar(1)) {
    const auto& ctx = *f.context();
    IntegralResult r;
    r.mode = "closed";
    r.c = c;
    r.series = ctx.label();
    SpectralFn p = f.p00();
    PowerSum w = detail::gamma_weight(ctx);
    GridScalar sum;
    for (auto& [i, v] : p.finite()) sum += v * w.at(ctx, i);
    PowerSum weighted = p.powers() * w;
    for (auto& [e, coef] : weighted.terms()) {
        auto g = detail::grid_sum(ctx, e, coef);
        if (!g) {
            r.divergent = true;
            r.note = "weight sum diverges on series " + ctx.label();
            r.value = std::numeric_limits<double>::infinity();
            return r;
        }
        sum += *g;
    }
    GridScalar total = GridScalar(c) * sum;
    r.exact = total;
    r.value = total.eval(q, detail::ctx_A(ctx, q));
    return r;
}

/// h(1), which has no finite value on any series.
inline IntegralResult normalize_h(const ContextPtr& ctx, double q) {
    return h_closed(SpectralElement::scalar(ctx, 1), q);
}

/// Sum over growing boxes until tail(K) <= tol.
inline IntegralResult h_closed(const ContextPtr& ctx, const RapidFn& psi, double q, double tol,
                               const QScalar& c = QScalar(1), int max_cutoff = 400) {
    IntegralResult r;
    r.mode = "closed";
    r.c = c;
    r.series = ctx->label();
    int K = 0;
    while (psi.tail(K) > tol) {
        if (++K > max_cutoff) throw divergence_error("tail bound does not fall below tolerance");
    }
    PowerSum w = detail::gamma_weight(*ctx);
    double A = detail::ctx_A(*ctx, q);
    cplx s = 0;
    detail::for_window(*ctx, K, [&](const Exps& i) { s += psi.value(i) * w.at(*ctx, i).eval(q, A); });
    r.value = c.eval(q) * s;
    r.tail_bound = std::abs(c.eval(q)) * psi.tail(K);
    return r;
}

/// Numeric c tr(pi(f) Gamma) on the truncated space.
inline IntegralResult h_trace(const SpectralElement& f, const Representation& R, const QScalar& c = QScalar(1)) {
    const auto& ctx = *f.context();
    check_context(R, f.context());
    IntegralResult r;
    r.mode = "trace";
    r.c = c;
    r.series = ctx.label();
    SparseOp pf = evaluate(R, f);
    PowerSum w = detail::gamma_weight(ctx);
    const double q = R.q(), A = R.config().A();
    cplx s = 0;
    for (int col = 0; col < R.dim(); ++col) {
        cplx d = pf.coeff(col, col);
        if (d != cplx(0)) s += d * w.at(ctx, R.basis().index(col)).eval(q, A);
    }
    r.value = c.eval(q) * s;
    auto closed = h_closed(f, q, c);
    if (closed.divergent) {
        r.divergent = true;
        r.tail_bound = std::numeric_limits<double>::infinity();
        r.note = closed.note;
        return r;
    }
    SpectralFn p = f.p00();
    GridScalar outside;
    for (auto& [i, v] : p.finite())
        if (!R.basis().in_window(i)) outside += v * w.at(ctx, i);
    double tail = std::abs(c.eval(q)) * std::abs(outside.eval(q, A));
    if (!p.powers().is_zero()) {
        auto powers = h_closed(SpectralElement(f.context(), SpectralFn::power(f.context(), p.powers())), q, c);
        cplx inside = 0;
        for (int col = 0; col < R.dim(); ++col) {
            auto i = R.basis().index(col);
            inside += (p.powers() * w).at(ctx, i).eval(q, A);
        }
        tail += std::abs(powers.value - c.eval(q) * inside);
    }
    r.tail_bound = tail;
    return r;
}

inline TailBound bounded_tail(double M, double p) {
    return [M, p](int K) { return M * std::pow(p, K + 1); };
}

/// (1-p) sum_{k>=0} phi(p^k) p^k; tail(K) bounds the terms with k > K.
inline IntegralResult jackson_01(const std::function<cplx(double)>& phi, double p, double tol, const TailBound& tail,
                                 int max_terms = 100000) {
    IntegralResult r;
    r.mode = "jackson";
    int K = 0;
    while (tail(K) > tol)
        if (++K > max_terms) throw divergence_error("nonconvergent tail bound");
    cplx s = 0;
    for (int k = K; k >= 0; --k) s += phi(std::pow(p, k)) * std::pow(p, k);
    r.value = (1 - p) * s;
    r.tail_bound = tail(K);
    return r;
}

/// (1-p) sum_{k in Z} phi(p^k) p^k; tail(K) bounds the terms with |k| > K.
inline IntegralResult jackson_0inf(const std::function<cplx(double)>& phi, double p, double tol,
                                   const TailBound& tail, int max_terms = 100000) {
    IntegralResult r;
    r.mode = "jackson";
    int K = 0;
    while (tail(K) > tol)
        if (++K > max_terms) throw divergence_error("nonconvergent tail bound");
    cplx s = 0;
    for (int k = K; k >= -K; --k) s += phi(std::pow(p, k)) * std::pow(p, k);
    r.value = (1 - p) * s;
    r.tail_bound = tail(K);
    return r;
}

/// Disc integral through the Jackson integral of psi_0: type (I) over [0,1], type (II) over [0,inf).
inline IntegralResult h_disc(const SpectralElement& f, double q, double tol, const QScalar& c = QScalar(1)) {
    const auto& ctx = *f.context();
    if (ctx.n != 1) throw domain_error("h_disc needs n = 1");
    SpectralFn psi = f.p00();
    const double p = q * q, A = detail::ctx_A(ctx, q);
    const bool type1 = ctx.k == 0;

    int reach = 0;
    for (auto& [i, v] : psi.finite()) reach = std::max(reach, std::abs(i[0]));
    // bound for the power-sum part: sum_{|k|>K} |c| q^{(e-2)|k|}
    std::vector<std::pair<double, int>> mono;
    for (auto& [e, coef] : psi.powers().terms()) {
        if (!type1 || e[0] <= 2) throw divergence_error("Jackson sum of psi_0 t^{-2} diverges");
        mono.push_back({std::abs(coef.eval(q)), e[0] - 2});
    }
    TailBound tail = [&](int K) {
        double b = 0;
        for (auto& [m, rate] : mono) b += m * std::pow(q, rate * (K + 1)) / (1 - std::pow(q, rate));
        return K >= reach ? (1 - p) * b : std::numeric_limits<double>::infinity();
    };
    auto node = [p](double t) { return static_cast<int>(std::lround(std::log(t) / std::log(p))); };

    IntegralResult r;
    if (type1) {
        auto phi = [&](double t) { return psi.at({node(t)}).eval(q, A) / (t * t); };
        r = jackson_01(phi, p, tol, tail);
        r.value *= c.eval(q) / (1 - p);
    } else {
        auto phi = [&](double t) { return psi.at({-node(t)}).eval(q, A) / (t * t); };
        r = jackson_0inf(phi, p, tol, tail);
        r.value *= c.eval(q) / (A * A * (1 - p));
    }
    r.tail_bound *= std::abs(c.eval(q)) / (1 - p);
    r.c = c;
    r.series = ctx.label();
    return r;
}

/// c = prod_{k=1}^n (1 - q^{2k}), fixed by h(1) = 1.
inline QScalar compact_constant(int n) {
    QScalar c(1);
    for (int k = 1; k <= n; ++k) c *= QScalar(1) - QScalar::q_pow(2 * k);
    return c;
}

/// Normalized U_q(su(n))-invariant integral c tr(f Q_1...Q_n) on the series (n,0,0).
inline IntegralResult h_compact(const AlgElement& f, double q) {
    const int n = f.n();
    if (n < 2) throw domain_error("h_compact needs n >= 2");
    auto ctx = SpectralContext::from(SeriesConfig::make(n, n, 0, 0, q, 1));
    IntegralResult r;
    r.mode = "compact";
    r.c = compact_constant(n);
    r.series = ctx->label();
    PowerSum p = PowerSum::embed(*ctx, f.p00()) * PowerSum::monomial(n, Exps(n, 2));
    QScalar s;
    for (auto& [e, coef] : p.terms()) s += detail::grid_sum(*ctx, e, coef)->constant_term();
    s *= r.c;
    r.exact = GridScalar(s);
    r.value = s.eval(q);
    return r;
}

/// Truncated c tr(pi(f) Q_1...Q_n) as an independent check of h_compact.
inline IntegralResult h_compact_trace(const AlgElement& f, const Representation& R) {
    const auto& cfg = R.config();
    if (cfg.m != cfg.n || cfg.n < 2) throw domain_error("h_compact needs the series (n,0,0), n >= 2");
    IntegralResult r;
    r.mode = "trace";
    r.c = compact_constant(cfg.n);
    r.series = cfg.label();
    SparseOp pf = R.evaluate(f);
    SparseOp p00 = R.evaluate(f.p00());
    cplx s = 0, inside = 0;
    for (int col = 0; col < R.dim(); ++col) {
        double w = 1;
        for (int j = 1; j <= cfg.n; ++j) w *= R.Qdiag(j)[col];
        s += pf.coeff(col, col) * w;
        inside += p00.coeff(col, col) * w;
    }
    const double c = r.c.eval(R.q()).real();
    r.value = c * s;
    r.tail_bound = std::abs(h_compact(f, R.q()).value - c * inside);
    return r;
}

/// h(X |> f) - eps(X) h(f) in the exact spectral calculus.
inline GridScalar invariance_defect(const Generator& g, const SpectralElement& f, const SpectralExpansion& X,
                                    double q = 0.5) {
    auto lhs = h_closed(act_expansion(g, f, X), q), rhs = h_closed(f, q);
    if (lhs.divergent || rhs.divergent) throw divergence_error("invariance needs a convergent integrand");
    return *lhs.exact - GridScalar(counit(g)) * *rhs.exact;
}

/// |h(X |> f) - eps(X) h(f)| from truncated traces, relative to max(1, largest term).
inline double invariance_residual_trace(const Generator& g, const SpectralElement& f, const Representation& R,
                                        const ExpansionOps& X) {
    SparseOp pf = evaluate(R, f);
    auto tr = [&](const SparseOp& T) {
        cplx s = 0;
        for (int col = 0; col < R.dim(); ++col) s += T.coeff(col, col) * X.Gamma.coeff(col, col);
        return s;
    };
    cplx total = -counit(g).eval(R.q()) * tr(pf);
    double scale = std::max(1.0, std::abs(total));
    for (auto& T : expansion_terms(X, g, pf, R.q())) {
        cplx t = tr(T);
        total += t;
        scale = std::max(scale, std::abs(t));
    }
    return std::abs(total) / scale;
}

inline QScalar compact_invariance_defect(const Generator& g, const AlgElement& f, const UqAction& act) {
    if (g.j >= f.n()) throw domain_error("h_compact is invariant only under U_q(su(n))");
    return h_compact(act.apply(g, f), 0.5).exact->constant_term() -
           counit(g) * h_compact(f, 0.5).exact->constant_term();
}

}  // namespace qball
