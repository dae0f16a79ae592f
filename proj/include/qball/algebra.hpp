#pragma once

#include "qball/qscalar.hpp"

#include <map>
#include <numeric>
#include <string>
#include <vector>

namespace qball {

using Exps = std::vector<int>;

/// Polynomial in the commuting variables Q_1..Q_n with QScalar coefficients.
class QPoly {
public:
    QPoly() = default;
    explicit QPoly(int n) : n_(n) {}
    QPoly(int n, const QScalar& c) : n_(n) {
        if (!c.is_zero()) terms_[Exps(n, 0)] = c;
    }

    /// Q_k for 1 <= k <= n+1 (Q_{n+1} = 1).
    static QPoly var(int n, int k) {
        if (k == n + 1) return QPoly(n, QScalar(1));
        if (k < 1 || k > n + 1) throw domain_error("Q index out of range");
        QPoly p(n);
        Exps e(n, 0);
        e[k - 1] = 1;
        p.terms_[e] = QScalar(1);
        return p;
    }

    int n() const { return n_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Exps, QScalar>& terms() const { return terms_; }

    void add_term(const Exps& e, const QScalar& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = terms_.try_emplace(e, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    QScalar coeff(const Exps& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? QScalar() : it->second;
    }

    int degree() const {
        int d = 0;
        for (auto& [e, c] : terms_) d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
        return d;
    }

    QPoly& operator+=(const QPoly& o) {
        if (n_ == 0) n_ = o.n_;
        for (auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    friend QPoly operator+(QPoly a, const QPoly& b) { return a += b; }
    QPoly operator-() const {
        QPoly r(n_);
        for (auto& [e, c] : terms_) r.terms_[e] = -c;
        return r;
    }
    friend QPoly operator-(QPoly a, const QPoly& b) { return a += -b; }
    friend QPoly operator*(const QPoly& a, const QPoly& b) {
        QPoly r(std::max(a.n_, b.n_));
        for (auto& [ea, ca] : a.terms_)
            for (auto& [eb, cb] : b.terms_) {
                Exps e(ea);
                for (size_t m = 0; m < e.size(); ++m) e[m] += eb[m];
                r.add_term(e, ca * cb);
            }
        return r;
    }
    QPoly scaled(const QScalar& s) const {
        QPoly r(n_);
        if (s.is_zero()) return r;
        for (auto& [e, c] : terms_) r.terms_[e] = c * s;
        return r;
    }
    QPoly times_s(int e) const {
        QPoly r = *this;
        for (auto& [k, c] : r.terms_) c = c.times_s(e);
        return r;
    }

    /// Substitute Q_m -> q^{2 count} Q_m for m <= b (1-based b).
    QPoly shifted(int b, int count) const {
        if (count == 0) return *this;
        QPoly r = *this;
        for (auto& [e, c] : r.terms_) {
            int w = 0;
            for (int m = 0; m < b; ++m) w += e[m];
            c = c.times_s(4 * count * w);
        }
        return r;
    }

    /// Q_{k+1} - q^{2 twist} Q_k in the same ring.
    QPoly qpair(int k, int twist) const {
        return var(n_, k + 1) - var(n_, k).times_s(4 * twist);
    }

    QPoly conj() const {
        QPoly r(n_);
        for (auto& [e, c] : terms_) r.terms_[e] = c.conj();
        return r;
    }

    friend bool operator==(const QPoly& a, const QPoly& b) { return a.terms_ == b.terms_; }

private:
    int n_ = 0;
    std::map<Exps, QScalar> terms_;
};

/// Normal-form monomial z^I (.) z^{*J}.
struct Monomial {
    Exps I, J;
    auto operator<=>(const Monomial&) const = default;
    bool operator==(const Monomial&) const = default;
    bool is_identity() const {
        for (int x : I) if (x) return false;
        for (int x : J) if (x) return false;
        return true;
    }
    int z_degree() const {
        return std::accumulate(I.begin(), I.end(), 0) + std::accumulate(J.begin(), J.end(), 0);
    }
};

namespace engine {

/// A single normal-ordered term z^I c z^{*J}; C is QPoly or a spectral coefficient.
template <class C>
struct Term {
    Exps I, J;
    C coef;
};

template <class C>
int sum_from(const Exps& v, int from) {
    int s = 0;
    for (size_t b = from; b < v.size(); ++b) s += v[b];
    return s;
}

/// Right-multiply by z_k (0-based k).
template <class C>
void rmul_z(Term<C>& t, int k) {
    int n = static_cast<int>(t.I.size());
    if (t.J[k] == 0) {
        int e = 0;
        for (int b = 0; b < n; ++b)
            if (b != k) e += t.J[b];
        e -= sum_from<C>(t.I, k + 1);
        t.coef = t.coef.shifted(k + 1, 1).times_s(2 * e);
        t.I[k] += 1;
        return;
    }
    C g = t.coef.qpair(k + 1, 1).shifted(k + 1, t.J[k] - 1);
    for (int b = 0; b < k; ++b) g = g.shifted(b + 1, t.J[b]);
    t.coef = (t.coef * g).times_s(2 * sum_from<C>(t.J, k + 1));
    t.J[k] -= 1;
}

/// Right-multiply by z_k^* (0-based k).
template <class C>
void rmul_zs(Term<C>& t, int k) {
    int n = static_cast<int>(t.I.size());
    if (t.I[k] == 0) {
        t.coef = t.coef.times_s(2 * sum_from<C>(t.J, k + 1));
        t.J[k] += 1;
        return;
    }
    int e = sum_from<C>(t.J, k + 1) - sum_from<C>(t.I, k + 1);
    for (int b = 0; b < k; ++b) e -= t.J[b];
    C g = t.coef.qpair(k + 1, 0);
    for (int b = k + 1; b < n; ++b) g = g.shifted(b + 1, t.I[b]);
    t.coef = (g * t.coef.shifted(k + 1, -1)).times_s(2 * e);
    t.I[k] -= 1;
}

/// Right-multiply by a coefficient function r(Q).
template <class C>
void rmul_coef(Term<C>& t, const C& r) {
    C s = r;
    for (size_t b = 0; b < t.J.size(); ++b) s = s.shifted(static_cast<int>(b) + 1, t.J[b]);
    t.coef = t.coef * s;
}

template <class C>
Term<C> product(Term<C> a, const Term<C>& b) {
    int n = static_cast<int>(a.I.size());
    for (int k = 0; k < n; ++k)
        for (int r = 0; r < b.I[k]; ++r) {
            rmul_z(a, k);
            if (a.coef.is_zero()) return a;
        }
    rmul_coef(a, b.coef);
    if (a.coef.is_zero()) return a;
    for (int k = 0; k < n; ++k)
        for (int r = 0; r < b.J[k]; ++r) {
            rmul_zs(a, k);
            if (a.coef.is_zero()) return a;
        }
    return a;
}

/// Involution of a single term, computed as the reversed product of starred letters.
template <class C>
Term<C> star(const Term<C>& t, const C& unit) {
    int n = static_cast<int>(t.I.size());
    Term<C> r{Exps(n, 0), Exps(n, 0), unit};
    for (int k = n - 1; k >= 0; --k)
        for (int c = 0; c < t.J[k]; ++c) rmul_z(r, k);
    rmul_coef(r, t.coef.conj());
    for (int k = n - 1; k >= 0; --k)
        for (int c = 0; c < t.I[k]; ++c) rmul_zs(r, k);
    return r;
}

}  // namespace engine

inline std::string render_coefficient_factor(const QScalar& c, bool first, bool& bare_one) {
    // returns leading sign text and the factor to print (empty when factor is 1)
    bare_one = false;
    std::string sign = first ? "" : " + ";
    QScalar v = c;
    if (c.is_monomial() && c.num().c[0].is_real() && sgn(c.num().c[0].re) < 0) {
        sign = first ? "-" : " - ";
        v = -c;
    }
    if (v.is_one()) {
        bare_one = true;
        return sign;
    }
    if (v.is_monomial()) {
        const Gauss& g = v.num().c[0];
        std::string qs = render_s_power(v.num().low);
        if (g.is_one()) return sign + qs;
        if (qs.empty()) return sign + render_gauss(g);
        return sign + render_gauss(g) + "*" + qs;
    }
    return sign + "(" + v.str() + ")";
}

/// Element of O_q(Mat_{n,1}) in normal form sum z^I p_IJ(Q) z^{*J}, I.J = 0.
class AlgElement {
public:
    AlgElement() = default;
    explicit AlgElement(int n) : n_(n) {}
    AlgElement(int n, const QScalar& c) : n_(n) {
        if (!c.is_zero()) terms_[identity_key()] = QPoly(n, c);
    }

    static AlgElement one(int n) { return AlgElement(n, QScalar(1)); }
    static AlgElement z(int n, int k) { return letter(n, k, false); }
    static AlgElement zs(int n, int k) { return letter(n, k, true); }
    static AlgElement Q(int n, int k) {
        AlgElement r(n);
        r.add(r.identity_key(), QPoly::var(n, k));
        return r;
    }
    static AlgElement from_term(int n, Monomial m, QPoly p) {
        AlgElement r(n);
        r.add(std::move(m), std::move(p));
        return r;
    }

    int n() const { return n_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Monomial, QPoly>& terms() const { return terms_; }

    Monomial identity_key() const { return Monomial{Exps(n_, 0), Exps(n_, 0)}; }

    void add(const Monomial& m, const QPoly& p) {
        if (p.is_zero()) return;
        auto [it, fresh] = terms_.try_emplace(m, p);
        if (!fresh) {
            it->second += p;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    /// Identity coefficient p_00.
    QPoly p00() const {
        auto it = terms_.find(identity_key());
        return it == terms_.end() ? QPoly(n_) : it->second;
    }

    int degree() const {
        int d = 0;
        for (auto& [m, p] : terms_) d = std::max(d, m.z_degree() + 2 * p.degree());
        return d;
    }

    AlgElement& operator+=(const AlgElement& o) {
        if (n_ == 0) n_ = o.n_;
        check(o);
        for (auto& [m, p] : o.terms_) add(m, p);
        return *this;
    }
    friend AlgElement operator+(AlgElement a, const AlgElement& b) { return a += b; }
    AlgElement operator-() const {
        AlgElement r(n_);
        for (auto& [m, p] : terms_) r.terms_[m] = -p;
        return r;
    }
    friend AlgElement operator-(AlgElement a, const AlgElement& b) { return a += -b; }
    AlgElement& operator-=(const AlgElement& b) { return *this += -b; }

    friend AlgElement operator*(const QScalar& s, const AlgElement& a) {
        AlgElement r(a.n_);
        if (s.is_zero()) return r;
        for (auto& [m, p] : a.terms_) r.terms_[m] = p.scaled(s);
        return r;
    }

    friend AlgElement operator*(const AlgElement& a, const AlgElement& b) {
        a.check(b);
        AlgElement r(a.n_);
        for (auto& [ma, pa] : a.terms_)
            for (auto& [mb, pb] : b.terms_) {
                auto t = engine::product(engine::Term<QPoly>{ma.I, ma.J, pa}, {mb.I, mb.J, pb});
                if (!t.coef.is_zero()) r.add(Monomial{t.I, t.J}, t.coef);
            }
        return r;
    }
    AlgElement& operator*=(const AlgElement& b) { return *this = *this * b; }

    AlgElement pow(int e) const {
        AlgElement r = one(n_);
        for (int k = 0; k < e; ++k) r *= *this;
        return r;
    }

    AlgElement star() const {
        AlgElement r(n_);
        QPoly unit(n_, QScalar(1));
        for (auto& [m, p] : terms_) {
            auto t = engine::star(engine::Term<QPoly>{m.I, m.J, p}, unit);
            r.add(Monomial{t.I, t.J}, t.coef);
        }
        return r;
    }

    friend bool operator==(const AlgElement& a, const AlgElement& b) {
        return a.n_ == b.n_ && a.terms_ == b.terms_;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        for (auto& [m, p] : terms_) {
            for (auto& [e, c] : p.terms()) {
                std::vector<std::string> f;
                for (int k = 0; k < n_; ++k)
                    if (m.I[k]) f.push_back("z" + std::to_string(k + 1) + pw(m.I[k]));
                for (int k = 0; k < n_; ++k)
                    if (e[k]) f.push_back("Q" + std::to_string(k + 1) + pw(e[k]));
                for (int k = 0; k < n_; ++k)
                    if (m.J[k]) f.push_back("z" + std::to_string(k + 1) + "*" + pw(m.J[k]));
                bool bare_one = false;
                std::string lead = render_coefficient_factor(c, first, bare_one);
                std::string body;
                for (auto& s : f) body += (body.empty() ? "" : "*") + s;
                bool lead_has_factor = !bare_one;
                if (body.empty()) out += lead + (bare_one ? "1" : "");
                else if (lead_has_factor) out += lead + "*" + body;
                else out += lead + body;
                first = false;
            }
        }
        return out;
    }

private:
    static std::string pw(int e) { return e == 1 ? "" : "^" + std::to_string(e); }

    static AlgElement letter(int n, int k, bool star) {
        if (k < 1 || k > n) throw domain_error("generator index out of range");
        AlgElement r(n);
        Monomial m{Exps(n, 0), Exps(n, 0)};
        (star ? m.J : m.I)[k - 1] = 1;
        r.add(m, QPoly(n, QScalar(1)));
        return r;
    }

    void check(const AlgElement& o) const {
        if (o.n_ != n_ && !o.terms_.empty() && !terms_.empty())
            throw domain_error("dimension mismatch between algebra elements");
    }

    int n_ = 0;
    std::map<Monomial, QPoly> terms_;
};

/// Every normal-form monomial z^I Q^a z^{*J} with |I| + |a| + |J| <= max_degree.
inline std::vector<AlgElement> all_monomials(int n, int max_degree) {
    std::vector<std::vector<int>> vecs{std::vector<int>(3 * n, 0)};
    for (size_t p = 0; p < vecs.size(); ++p) {
        int tot = std::accumulate(vecs[p].begin(), vecs[p].end(), 0);
        if (tot == max_degree) continue;
        int last = 3 * n - 1;
        while (last >= 0 && vecs[p][last] == 0) --last;
        for (int s = std::max(last, 0); s < 3 * n; ++s) {
            auto v = vecs[p];
            v[s]++;
            int m = s % n;
            if (v[m] && v[2 * n + m]) continue;
            vecs.push_back(v);
        }
    }
    std::vector<AlgElement> out;
    for (auto& v : vecs) {
        Monomial mono{Exps(v.begin(), v.begin() + n), Exps(v.begin() + 2 * n, v.end())};
        QPoly p(n);
        p.add_term(Exps(v.begin() + n, v.begin() + 2 * n), QScalar(1));
        out.push_back(AlgElement::from_term(n, mono, p));
    }
    return out;
}

/// Letters of a word: z_k, z_k^*, Q_k, or a scalar.
struct Letter {
    enum Kind { Z, ZS, Q, Scalar } kind;
    int index = 0;
    QScalar value{};
};

inline AlgElement normalize(int n, const std::vector<Letter>& word) {
    AlgElement r = AlgElement::one(n);
    for (auto& l : word) {
        switch (l.kind) {
            case Letter::Z: r *= AlgElement::z(n, l.index); break;
            case Letter::ZS: r *= AlgElement::zs(n, l.index); break;
            case Letter::Q: r *= AlgElement::Q(n, l.index); break;
            case Letter::Scalar: r = l.value * r; break;
        }
    }
    return r;
}

/// (x; b)_m = prod_{k<m} (1 - b^k x) with x = c Q_1, b = q^{step}.
inline AlgElement pochhammer_Q1(int n, const QScalar& c, int step, int m) {
    AlgElement r = AlgElement::one(n);
    for (int k = 0; k < m; ++k)
        r *= AlgElement::one(n) - (c * QScalar::q_pow(step * k)) * AlgElement::Q(n, 1);
    return r;
}

}  // namespace qball
