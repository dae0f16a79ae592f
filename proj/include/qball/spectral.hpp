#pragma once

#include "qball/parse.hpp"
#include "qball/random.hpp"
#include "qball/representations.hpp"

#include <memory>

namespace qball {

class context_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Laurent polynomial in the spectral parameter A with QScalar coefficients.
class GridScalar {
public:
    GridScalar() = default;
    GridScalar(const QScalar& c) {
        if (!c.is_zero()) c_[0] = c;
    }
    GridScalar(long v) : GridScalar(QScalar(v)) {}

    static GridScalar A_pow(int e, const QScalar& c = QScalar(1)) {
        GridScalar g;
        if (!c.is_zero()) g.c_[e] = c;
        return g;
    }

    bool is_zero() const { return c_.empty(); }
    const std::map<int, QScalar>& terms() const { return c_; }
    QScalar constant_term() const {
        auto it = c_.find(0);
        return it == c_.end() ? QScalar() : it->second;
    }

    GridScalar& operator+=(const GridScalar& o) {
        for (auto& [e, c] : o.c_) {
            auto [it, fresh] = c_.try_emplace(e, c);
            if (!fresh) {
                it->second += c;
                if (it->second.is_zero()) c_.erase(it);
            }
        }
        return *this;
    }
    friend GridScalar operator+(GridScalar a, const GridScalar& b) { return a += b; }
    GridScalar operator-() const {
        GridScalar r;
        for (auto& [e, c] : c_) r.c_[e] = -c;
        return r;
    }
    friend GridScalar operator-(GridScalar a, const GridScalar& b) { return a += -b; }
    GridScalar& operator-=(const GridScalar& b) { return *this += -b; }
    friend GridScalar operator*(const GridScalar& a, const GridScalar& b) {
        GridScalar r;
        for (auto& [ea, ca] : a.c_)
            for (auto& [eb, cb] : b.c_) r += A_pow(ea + eb, ca * cb);
        return r;
    }
    GridScalar times_s(int e) const {
        GridScalar r = *this;
        for (auto& [k, c] : r.c_) c = c.times_s(e);
        return r;
    }
    GridScalar conj() const {
        GridScalar r;
        for (auto& [e, c] : c_) r.c_[e] = c.conj();
        return r;
    }
    friend bool operator==(const GridScalar& a, const GridScalar& b) { return a.c_ == b.c_; }

    cplx eval(double q, double A) const {
        cplx s = 0;
        for (auto& [e, c] : c_) s += c.eval(q) * std::pow(A, e);
        return s;
    }

    /// Exact value when A = q^{2 alpha} is an integral power of q^{1/2} on every term.
    std::optional<QScalar> as_qscalar(const mpq_class& alpha) const {
        QScalar r;
        for (auto& [e, c] : c_) {
            mpq_class se = 4 * alpha * e;
            if (se.get_den() != 1) return std::nullopt;
            r += c.times_s(static_cast<int>(se.get_num().get_si()));
        }
        return r;
    }

    std::string str() const {
        if (c_.empty()) return "0";
        std::string out;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
            if (!out.empty()) out += " + ";
            if (it->first == 0) out += it->second.is_monomial() ? it->second.str() : "(" + it->second.str() + ")";
            else {
                out += it->second.is_one() ? "" : "(" + it->second.str() + ")*";
                out += it->first == 1 ? "A" : "A^" + (it->first < 0 ? "(" + std::to_string(it->first) + ")" : std::to_string(it->first));
            }
        }
        return out;
    }

private:
    std::map<int, QScalar> c_;
};

/// Joint spectrum of Q_1..Q_n for a series (m,0,k), indexed like Basis: i_1..i_n.
struct SpectralContext {
    int n = 1, k = 0;
    mpq_class alpha = 0;

    static std::shared_ptr<const SpectralContext> from(const SeriesConfig& c) {
        if (c.l > 0) throw unsupported_series("spectral calculus needs a series (m,0,k)");
        auto p = std::make_shared<SpectralContext>();
        p->n = c.n, p->k = c.k, p->alpha = c.alpha;
        return p;
    }

    SeriesConfig config(double q = 0.5, int N = 12) const { return SeriesConfig::make(n, n - k, 0, k, q, N, alpha); }
    std::string label() const { return "(" + std::to_string(n - k) + ",0," + std::to_string(k) + ")"; }

    int eps(int m) const { return m > k ? 1 : -1; }
    /// Index displacement carried by z_b.
    int delta(int b) const { return b > k ? 1 : -1; }
    bool valid(const Exps& i) const {
        for (int d = 1; d <= n; ++d) {
            if (d > k && i[d - 1] < 0) return false;
            if (d < k && i[d - 1] < 1) return false;
        }
        return true;
    }
    /// |Q_m|^{1/2} = q^{L_m(i)} A^{[m <= k]}.
    int L(int m, const Exps& i) const {
        int s = 0;
        if (m > n) return 0;
        if (m > k) {
            for (int d = m; d <= n; ++d) s += i[d - 1];
            return s;
        }
        for (int d = m; d <= k; ++d) s -= i[d - 1];
        for (int d = k + 1; d <= n; ++d) s += i[d - 1];
        return s;
    }
    /// Coefficients c_d with sum_m e_m L_m(i) = sum_d c_d i_d.
    std::vector<int> rates(const Exps& e) const {
        std::vector<int> c(n, 0);
        for (int m = 1; m <= n; ++m)
            for (int d = 1; d <= n; ++d) {
                if (m > k && d >= m) c[d - 1] += e[m - 1];
                if (m <= k && d >= m && d <= k) c[d - 1] -= e[m - 1];
                if (m <= k && d > k) c[d - 1] += e[m - 1];
            }
        return c;
    }
    int a_degree(const Exps& e) const {
        int s = 0;
        for (int m = 1; m <= k; ++m) s += e[m - 1];
        return s;
    }
    bool operator==(const SpectralContext& o) const { return n == o.n && k == o.k && alpha == o.alpha; }
};
using ContextPtr = std::shared_ptr<const SpectralContext>;

/// Laurent polynomial in r_m = |Q_m|^{1/2}; Q_m = eps_m r_m^2.
class PowerSum {
public:
    PowerSum() = default;
    explicit PowerSum(int n) : n_(n) {}
    static PowerSum monomial(int n, Exps e, const QScalar& c = QScalar(1)) {
        PowerSum p(n);
        if (!c.is_zero()) p.t_[std::move(e)] = c;
        return p;
    }
    static PowerSum constant(int n, const QScalar& c) { return monomial(n, Exps(n, 0), c); }
    static PowerSum Q(const SpectralContext& ctx, int m) {
        if (m == ctx.n + 1) return constant(ctx.n, 1);
        Exps e(ctx.n, 0);
        e[m - 1] = 2;
        return monomial(ctx.n, e, QScalar(ctx.eps(m)));
    }
    static PowerSum embed(const SpectralContext& ctx, const QPoly& p) {
        PowerSum r(ctx.n);
        for (auto& [e, c] : p.terms()) {
            Exps x(ctx.n);
            int sign = 1;
            for (int m = 0; m < ctx.n; ++m) {
                x[m] = 2 * e[m];
                if (ctx.eps(m + 1) < 0 && e[m] % 2) sign = -sign;
            }
            r.add(x, sign > 0 ? c : -c);
        }
        return r;
    }

    bool is_zero() const { return t_.empty(); }
    const std::map<Exps, QScalar>& terms() const { return t_; }

    void add(const Exps& e, const QScalar& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = t_.try_emplace(e, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }
    PowerSum& operator+=(const PowerSum& o) {
        if (n_ == 0) n_ = o.n_;
        for (auto& [e, c] : o.t_) add(e, c);
        return *this;
    }
    PowerSum operator-() const {
        PowerSum r(n_);
        for (auto& [e, c] : t_) r.t_[e] = -c;
        return r;
    }
    friend PowerSum operator*(const PowerSum& a, const PowerSum& b) {
        PowerSum r(std::max(a.n_, b.n_));
        for (auto& [ea, ca] : a.t_)
            for (auto& [eb, cb] : b.t_) {
                Exps e(ea);
                for (size_t m = 0; m < e.size(); ++m) e[m] += eb[m];
                r.add(e, ca * cb);
            }
        return r;
    }
    PowerSum times_s(int s) const {
        PowerSum r = *this;
        for (auto& [e, c] : r.t_) c = c.times_s(s);
        return r;
    }
    /// Q_m -> q^{2 count} Q_m for m <= b.
    PowerSum shifted(int b, int count) const {
        PowerSum r = *this;
        for (auto& [e, c] : r.t_) {
            int w = 0;
            for (int m = 0; m < b && m < n_; ++m) w += e[m];
            c = c.times_s(2 * count * w);
        }
        return r;
    }
    PowerSum conj() const {
        PowerSum r(n_);
        for (auto& [e, c] : t_) r.t_[e] = c.conj();
        return r;
    }
    friend bool operator==(const PowerSum& a, const PowerSum& b) { return a.t_ == b.t_; }

    GridScalar at(const SpectralContext& ctx, const Exps& i) const {
        GridScalar s;
        for (auto& [e, c] : t_) {
            int w = 0;
            for (int m = 1; m <= n_; ++m) w += e[m - 1] * ctx.L(m, i);
            s += GridScalar::A_pow(ctx.a_degree(e), c.times_s(2 * w));
        }
        return s;
    }

    std::string str() const {
        if (t_.empty()) return "0";
        std::string out;
        for (auto& [e, c] : t_) {
            std::string f;
            for (int m = 0; m < n_; ++m)
                if (e[m]) {
                    f += "*|Q" + std::to_string(m + 1) + "|";
                    if (e[m] != 2) f += e[m] % 2 ? "^(" + std::to_string(e[m]) + "/2)" : "^" + pw(e[m] / 2);
                }
            out += (out.empty() ? "" : " + ") + ("(" + c.str() + ")") + f;
        }
        return out;
    }

private:
    static std::string pw(int e) { return e < 0 ? "(" + std::to_string(e) + ")" : std::to_string(e); }
    int n_ = 0;
    std::map<Exps, QScalar> t_;
};

/// Function on the joint spectrum: finite-support part plus a power-sum part.
class SpectralFn {
public:
    SpectralFn() = default;
    explicit SpectralFn(ContextPtr ctx) : ctx_(std::move(ctx)), pow_(ctx_->n) {}
    SpectralFn(ContextPtr ctx, const QScalar& c) : SpectralFn(std::move(ctx)) {
        pow_ = PowerSum::constant(ctx_->n, c);
    }

    static SpectralFn delta(ContextPtr ctx, const Exps& i, const GridScalar& v = GridScalar(1)) {
        if (static_cast<int>(i.size()) != ctx->n) throw context_error("delta needs one index per Q_j");
        SpectralFn f(std::move(ctx));
        f.set(i, v);
        return f;
    }
    static SpectralFn power(ContextPtr ctx, PowerSum p) {
        SpectralFn f(std::move(ctx));
        f.pow_ = std::move(p);
        return f;
    }
    static SpectralFn embed(ContextPtr ctx, const QPoly& p) {
        auto e = PowerSum::embed(*ctx, p);
        return power(std::move(ctx), std::move(e));
    }

    const ContextPtr& context() const { return ctx_; }
    const std::map<Exps, GridScalar>& finite() const { return fin_; }
    const PowerSum& powers() const { return pow_; }
    bool is_zero() const { return fin_.empty() && pow_.is_zero(); }
    bool is_finite() const { return pow_.is_zero(); }

    GridScalar at(const Exps& i) const {
        if (!ctx_ || !ctx_->valid(i)) return GridScalar();
        GridScalar v = pow_.at(*ctx_, i);
        auto it = fin_.find(i);
        if (it != fin_.end()) v += it->second;
        return v;
    }

    SpectralFn& operator+=(const SpectralFn& o) {
        adopt(o);
        for (auto& [i, v] : o.fin_) set(i, v, true);
        pow_ += o.pow_;
        return *this;
    }
    friend SpectralFn operator+(SpectralFn a, const SpectralFn& b) { return a += b; }
    SpectralFn operator-() const {
        SpectralFn r = *this;
        for (auto& [i, v] : r.fin_) v = -v;
        r.pow_ = -pow_;
        return r;
    }
    friend SpectralFn operator-(SpectralFn a, const SpectralFn& b) { return a += -b; }

    friend SpectralFn operator*(const SpectralFn& a, const SpectralFn& b) {
        SpectralFn r = a.ctx_ ? SpectralFn(a.ctx_) : SpectralFn(b.ctx_);
        if (!a.ctx_ || !b.ctx_) return r;
        r.adopt(b);
        const auto& ctx = *r.ctx_;
        for (auto& [i, v] : a.fin_) {
            GridScalar w = b.pow_.at(ctx, i);
            auto it = b.fin_.find(i);
            if (it != b.fin_.end()) w += it->second;
            r.set(i, v * w, true);
        }
        for (auto& [i, v] : b.fin_) r.set(i, a.pow_.at(ctx, i) * v, true);
        r.pow_ = a.pow_ * b.pow_;
        return r;
    }

    SpectralFn scaled(const GridScalar& g) const {
        SpectralFn r(ctx_);
        for (auto& [i, v] : fin_) r.set(i, v * g);
        if (pow_.is_zero()) return r;
        for (auto& [e, c] : g.terms()) {
            if (e != 0) throw context_error("A-dependent scale of a power sum");
            for (auto& [x, y] : pow_.terms()) r.pow_.add(x, y * c);
        }
        return r;
    }
    SpectralFn times_s(int e) const {
        SpectralFn r = *this;
        for (auto& [i, v] : r.fin_) v = v.times_s(e);
        r.pow_ = pow_.times_s(e);
        return r;
    }
    /// Q_m -> q^{2 count} Q_m for m <= b, realized on the grid as the index shift of z_b.
    SpectralFn shifted(int b, int count) const {
        if (count == 0 || !ctx_) return *this;
        SpectralFn r(ctx_);
        int d = count * ctx_->delta(b);
        for (auto& [i, v] : fin_) {
            Exps j = i;
            j[b - 1] -= d;
            r.set(j, v);
        }
        r.pow_ = pow_.shifted(b, count);
        return r;
    }
    /// Q_{k+1} - q^{2 twist} Q_k.
    SpectralFn qpair(int k, int twist) const {
        PowerSum p = PowerSum::Q(*ctx_, k + 1);
        p += -PowerSum::Q(*ctx_, k).times_s(4 * twist);
        return power(ctx_, p);
    }
    SpectralFn conj() const {
        SpectralFn r = *this;
        for (auto& [i, v] : r.fin_) v = v.conj();
        r.pow_ = pow_.conj();
        return r;
    }
    friend bool operator==(const SpectralFn& a, const SpectralFn& b) {
        return a.fin_ == b.fin_ && a.pow_ == b.pow_;
    }

    std::string str() const {
        std::string out;
        for (auto& [i, v] : fin_) {
            std::string idx;
            for (int x : i) idx += (idx.empty() ? "" : ",") + std::to_string(x);
            out += (out.empty() ? "" : " + ") + ("(" + v.str() + ")*delta(" + idx + ")");
        }
        if (!pow_.is_zero()) out += (out.empty() ? "" : " + ") + pow_.str();
        return out.empty() ? "0" : out;
    }

private:
    void adopt(const SpectralFn& o) {
        if (!o.ctx_) return;
        if (!ctx_) {
            ctx_ = o.ctx_;
            pow_ = PowerSum(ctx_->n);
        } else if (ctx_ != o.ctx_ && !(*ctx_ == *o.ctx_)) {
            throw context_error("spectral coefficients belong to different series");
        }
    }
    void set(const Exps& i, const GridScalar& v, bool accumulate = false) {
        if (!ctx_->valid(i)) return;
        if (!accumulate) {
            if (v.is_zero()) fin_.erase(i);
            else fin_[i] = v;
            return;
        }
        GridScalar& slot = fin_[i];
        slot += v;
        if (slot.is_zero()) fin_.erase(i);
    }

    ContextPtr ctx_;
    std::map<Exps, GridScalar> fin_;
    PowerSum pow_;
};

/// sum z^I psi_IJ(Q) z^{*J} with spectral coefficients.
class SpectralElement {
public:
    explicit SpectralElement(ContextPtr ctx) : ctx_(std::move(ctx)) {}
    SpectralElement(ContextPtr ctx, const SpectralFn& coef) : ctx_(std::move(ctx)) { add(identity_key(), coef); }

    static SpectralElement scalar(ContextPtr ctx, const QScalar& c) {
        auto cc = ctx;
        return SpectralElement(std::move(ctx), SpectralFn(cc, c));
    }
    static SpectralElement z(ContextPtr ctx, int k) { return letter(std::move(ctx), k, false); }
    static SpectralElement zs(ContextPtr ctx, int k) { return letter(std::move(ctx), k, true); }
    static SpectralElement embed(ContextPtr ctx, const AlgElement& a) {
        if (a.n() != ctx->n) throw context_error("dimension mismatch");
        SpectralElement r(ctx);
        for (auto& [m, p] : a.terms()) r.add(m, SpectralFn::embed(ctx, p));
        return r;
    }

    const ContextPtr& context() const { return ctx_; }
    int n() const { return ctx_->n; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Monomial, SpectralFn>& terms() const { return terms_; }
    Monomial identity_key() const { return Monomial{Exps(n(), 0), Exps(n(), 0)}; }

    void add(const Monomial& m, const SpectralFn& f) {
        if (f.is_zero()) return;
        auto [it, fresh] = terms_.try_emplace(m, f);
        if (!fresh) {
            it->second += f;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    SpectralFn p00() const {
        auto it = terms_.find(identity_key());
        return it == terms_.end() ? SpectralFn(ctx_) : it->second;
    }

    SpectralElement& operator+=(const SpectralElement& o) {
        check(o);
        for (auto& [m, f] : o.terms_) add(m, f);
        return *this;
    }
    friend SpectralElement operator+(SpectralElement a, const SpectralElement& b) { return a += b; }
    SpectralElement operator-() const {
        SpectralElement r(ctx_);
        for (auto& [m, f] : terms_) r.terms_[m] = -f;
        return r;
    }
    friend SpectralElement operator-(SpectralElement a, const SpectralElement& b) { return a += -b; }
    friend SpectralElement operator*(const QScalar& s, const SpectralElement& a) {
        return SpectralElement::scalar(a.ctx_, s) * a;
    }
    friend SpectralElement operator*(const SpectralElement& a, const SpectralElement& b) {
        a.check(b);
        SpectralElement r(a.ctx_);
        for (auto& [ma, fa] : a.terms_)
            for (auto& [mb, fb] : b.terms_) {
                auto t = engine::product(engine::Term<SpectralFn>{ma.I, ma.J, fa}, {mb.I, mb.J, fb});
                if (!t.coef.is_zero()) r.add(Monomial{t.I, t.J}, t.coef);
            }
        return r;
    }
    SpectralElement star() const {
        SpectralElement r(ctx_);
        SpectralFn unit(ctx_, QScalar(1));
        for (auto& [m, f] : terms_) {
            auto t = engine::star(engine::Term<SpectralFn>{m.I, m.J, f}, unit);
            r.add(Monomial{t.I, t.J}, t.coef);
        }
        return r;
    }
    bool is_finite() const {
        for (auto& [m, f] : terms_)
            if (!f.is_finite()) return false;
        return true;
    }
    friend bool operator==(const SpectralElement& a, const SpectralElement& b) { return a.terms_ == b.terms_; }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (auto& [m, f] : terms_) {
            std::string w;
            for (int k = 0; k < n(); ++k)
                if (m.I[k]) w += "z" + std::to_string(k + 1) + (m.I[k] > 1 ? "^" + std::to_string(m.I[k]) : "") + "*";
            w += "[" + f.str() + "]";
            for (int k = 0; k < n(); ++k)
                if (m.J[k]) w += "*z" + std::to_string(k + 1) + "*" + (m.J[k] > 1 ? "^" + std::to_string(m.J[k]) : "");
            out += (out.empty() ? "" : " + ") + w;
        }
        return out;
    }

private:
    static SpectralElement letter(ContextPtr ctx, int k, bool star) {
        if (k < 1 || k > ctx->n) throw domain_error("generator index out of range");
        SpectralElement r(ctx);
        Monomial m{Exps(ctx->n, 0), Exps(ctx->n, 0)};
        (star ? m.J : m.I)[k - 1] = 1;
        r.add(m, SpectralFn(ctx, QScalar(1)));
        return r;
    }
    void check(const SpectralElement& o) const {
        if (ctx_ != o.ctx_ && !(*ctx_ == *o.ctx_)) throw context_error("elements belong to different series");
    }

    ContextPtr ctx_;
    std::map<Monomial, SpectralFn> terms_;
};

/// rho_l, rho_l^{-1}, A_l, B_l and Gamma as spectral elements.
struct SpectralExpansion {
    std::vector<SpectralElement> rho, rho_inv, A, B;
    SpectralElement Gamma;
};

inline SpectralElement power_element(const ContextPtr& ctx, const Exps& e, const QScalar& c = QScalar(1)) {
    return SpectralElement(ctx, SpectralFn::power(ctx, PowerSum::monomial(ctx->n, e, c)));
}

inline SpectralExpansion spectral_expansion_ops(const ContextPtr& ctx) {
    const int n = ctx->n;
    const QScalar linv = QScalar::lambda().inverse();
    SpectralExpansion X{{}, {}, {}, {}, SpectralElement(ctx)};
    for (int l = 1; l <= n; ++l) {
        Exps e(n, 0);
        if (l < n) {
            e[l - 1] += 1;
            e[l] -= 2;
            if (l + 1 < n) e[l + 1] += 1;
        } else {
            e[0] += 1;
            e[n - 1] += 1;
        }
        Exps ei(n);
        for (int m = 0; m < n; ++m) ei[m] = -e[m];
        SpectralElement rho = power_element(ctx, e), rinv = power_element(ctx, ei);
        SpectralElement a(ctx), b(ctx);
        if (l < n) {
            Exps qi(n, 0);
            qi[l] = -2;
            a = power_element(ctx, qi, QScalar(ctx->eps(l + 1)) * QScalar::s_pow(-5, Gauss(-1)) * linv) *
                SpectralElement::zs(ctx, l + 1) * SpectralElement::z(ctx, l);
            b = rinv * a.star();
        } else {
            a = (QScalar::s_pow(-1) * linv) * SpectralElement::z(ctx, n);
            b = -(rinv * a.star());
        }
        X.rho.push_back(rho);
        X.rho_inv.push_back(rinv);
        X.A.push_back(a);
        X.B.push_back(b);
    }
    Exps g(n, 2);
    g[0] = -2 * n;
    X.Gamma = power_element(ctx, g);
    return X;
}

/// X |> f via the operator expansion, computed exactly in the spectral algebra.
inline SpectralElement act_expansion(const Generator& g, const SpectralElement& f, const SpectralExpansion& X) {
    const int j = g.j - 1;
    const auto &rho = X.rho.at(j), &rinv = X.rho_inv.at(j);
    switch (g.kind) {
        case Generator::K: return rho * f * rinv;
        case Generator::Kinv: return rinv * f * rho;
        case Generator::E: return X.A[j] * f - rho * f * rinv * X.A[j];
        default: return X.B[j] * f * rho - QScalar::q_pow(2) * (f * rho * X.B[j]);
    }
}

inline SpectralElement act_expansion(const Generator& g, const SpectralElement& f) {
    return act_expansion(g, f, spectral_expansion_ops(f.context()));
}

inline void check_context(const Representation& R, const ContextPtr& ctx) {
    const auto& c = R.config();
    if (c.l != 0 || c.n != ctx->n || c.k != ctx->k || c.alpha != ctx->alpha)
        throw context_error("spectral element does not match the representation series");
}

inline SparseOp evaluate(const Representation& R, const SpectralFn& f) {
    const auto& ctx = f.context();
    if (!ctx) return SparseOp(R.dim(), R.dim());
    check_context(R, ctx);
    const double q = R.q(), A = R.config().A();
    return R.diag([&](int fl) { return f.at(R.basis().index(fl)).eval(q, A); });
}

inline std::vector<SparseOp> evaluate_terms(const Representation& R, const SpectralElement& a) {
    std::vector<SparseOp> out;
    for (auto& [m, f] : a.terms()) out.push_back(R.word(m.I, false) * evaluate(R, f) * R.word(m.J, true));
    return out;
}

inline SparseOp evaluate(const Representation& R, const SpectralElement& a) {
    check_context(R, a.context());
    SparseOp r(R.dim(), R.dim());
    for (auto& t : evaluate_terms(R, a)) r += t;
    return r;
}

inline SpectralElement eval_spectral(const ExprPtr& e, const ContextPtr& ctx) {
    if (is_scalar_expr(e)) return SpectralElement::scalar(ctx, eval_scalar(e));
    switch (e->kind) {
        case Expr::Z: return SpectralElement::z(ctx, e->index);
        case Expr::ZS: return SpectralElement::zs(ctx, e->index);
        case Expr::QGen: {
            if (e->index < 1 || e->index > ctx->n + 1) throw parse_error("Q index out of range");
            return SpectralElement(ctx, SpectralFn::power(ctx, PowerSum::Q(*ctx, e->index)));
        }
        case Expr::Delta: {
            if (static_cast<int>(e->ints.size()) != ctx->n)
                throw parse_error("delta needs " + std::to_string(ctx->n) + " indices");
            if (!ctx->valid(e->ints)) throw parse_error("delta index lies outside the spectrum");
            return SpectralElement(ctx, SpectralFn::delta(ctx, e->ints));
        }
        case Expr::PolyFn: {
            AlgElement p = eval_algebra(e->kids[0], ctx->n);
            for (auto& [m, c] : p.terms())
                if (!m.is_identity()) throw parse_error("poly() takes a polynomial in Q1..Qn");
            return SpectralElement(ctx, SpectralFn::embed(ctx, p.p00()));
        }
        case Expr::Add: return eval_spectral(e->kids[0], ctx) + eval_spectral(e->kids[1], ctx);
        case Expr::Sub: return eval_spectral(e->kids[0], ctx) - eval_spectral(e->kids[1], ctx);
        case Expr::Mul: return eval_spectral(e->kids[0], ctx) * eval_spectral(e->kids[1], ctx);
        case Expr::Neg: return -eval_spectral(e->kids[0], ctx);
        case Expr::Div: {
            if (!is_scalar_expr(e->kids[1])) throw parse_error("division by a non-scalar");
            QScalar d = eval_scalar(e->kids[1]);
            if (d.is_zero()) throw parse_error("division by zero");
            return d.inverse() * eval_spectral(e->kids[0], ctx);
        }
        case Expr::Pow: {
            if (e->num.get_den() != 1 || sgn(e->num) < 0)
                throw parse_error("algebra powers must be non-negative integers");
            SpectralElement b = eval_spectral(e->kids[0], ctx), r = SpectralElement::scalar(ctx, 1);
            for (long c = 0; c < e->num.get_num().get_si(); ++c) r = r * b;
            return r;
        }
        default: throw parse_error("unsupported expression");
    }
}

inline SpectralElement parse_spectral(const std::string& text, const ContextPtr& ctx) {
    try {
        return eval_spectral(parse_expr(text), ctx);
    } catch (const domain_error& ex) {
        throw parse_error(ex.what());
    }
}

/// Random sum of terms z^I delta_i z^{*J} with i near the corner of the spectrum.
inline SpectralElement random_finite_element(RandomSource& rs, const ContextPtr& ctx, int terms = 3,
                                             bool gaussian = true) {
    SpectralElement f(ctx);
    for (int t = 0; t < terms; ++t) {
        auto [m, a] = rs.monomial(ctx->n, 3);
        Exps i(ctx->n);
        for (int d = 1; d <= ctx->n; ++d)
            i[d - 1] = d > ctx->k ? rs.uniform(0, 3) : d < ctx->k ? rs.uniform(1, 4) : rs.uniform(-2, 2);
        f.add(m, SpectralFn::delta(ctx, i, GridScalar(rs.scalar(2, gaussian))));
    }
    return f;
}

}  // namespace qball
