#pragma once

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qball {

class domain_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Gaussian rational a + b i.
struct Gauss {
    mpq_class re{0}, im{0};

    Gauss() = default;
    Gauss(long v) : re(v) {}
    Gauss(mpq_class r, mpq_class i = 0) : re(std::move(r)), im(std::move(i)) {}

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
    bool is_one() const { return re == 1 && sgn(im) == 0; }
    bool is_real() const { return sgn(im) == 0; }

    Gauss conj() const { return Gauss(re, -im); }
    Gauss operator-() const { return Gauss(-re, -im); }

    friend Gauss operator+(const Gauss& a, const Gauss& b) { return Gauss(a.re + b.re, a.im + b.im); }
    friend Gauss operator-(const Gauss& a, const Gauss& b) { return Gauss(a.re - b.re, a.im - b.im); }
    friend Gauss operator*(const Gauss& a, const Gauss& b) {
        if (sgn(a.im) == 0 && sgn(b.im) == 0) return Gauss(a.re * b.re);
        return Gauss(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
    }
    Gauss inverse() const {
        if (is_zero()) throw domain_error("division by zero");
        if (sgn(im) == 0) return Gauss(1 / re);
        mpq_class d = re * re + im * im;
        return Gauss(re / d, -im / d);
    }
    friend Gauss operator/(const Gauss& a, const Gauss& b) { return a * b.inverse(); }
    Gauss& operator+=(const Gauss& b) { re += b.re; im += b.im; return *this; }
    Gauss& operator-=(const Gauss& b) { re -= b.re; im -= b.im; return *this; }

    friend bool operator==(const Gauss& a, const Gauss& b) { return a.re == b.re && a.im == b.im; }

    std::complex<double> value() const { return {re.get_d(), im.get_d()}; }
};

// "2", "(-1)", "(1/3)", "(2*i)", "(1-3*i)"
inline std::string render_gauss(const Gauss& g) {
    if (g.is_real()) {
        if (sgn(g.re) >= 0 && g.re.get_den() == 1) return g.re.get_str();
        return "(" + g.re.get_str() + ")";
    }
    std::string s = "(";
    if (sgn(g.re) != 0) s += g.re.get_str();
    if (g.im == 1) s += (sgn(g.re) != 0 ? "+i" : "i");
    else if (g.im == -1) s += "-i";
    else {
        if (sgn(g.im) > 0 && sgn(g.re) != 0) s += "+";
        s += g.im.get_str() + "*i";
    }
    return s + ")";
}

/// Laurent polynomial in s with Gaussian-rational coefficients: sum c[k] s^(low+k).
struct Laurent {
    int low = 0;
    std::vector<Gauss> c;

    Laurent() = default;
    explicit Laurent(Gauss v, int e = 0) : low(e) {
        if (!v.is_zero()) c.push_back(std::move(v));
    }

    bool is_zero() const { return c.empty(); }
    int high() const { return low + static_cast<int>(c.size()) - 1; }
    bool is_monomial() const { return c.size() == 1; }

    void trim() {
        size_t a = 0;
        while (a < c.size() && c[a].is_zero()) ++a;
        if (a == c.size()) { c.clear(); low = 0; return; }
        size_t b = c.size();
        while (c[b - 1].is_zero()) --b;
        if (a > 0 || b < c.size()) c = std::vector<Gauss>(c.begin() + a, c.begin() + b);
        low += static_cast<int>(a);
    }

    Gauss coeff(int e) const {
        int k = e - low;
        if (k < 0 || k >= static_cast<int>(c.size())) return Gauss();
        return c[k];
    }

    friend Laurent operator+(const Laurent& a, const Laurent& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        Laurent r;
        r.low = std::min(a.low, b.low);
        int hi = std::max(a.high(), b.high());
        r.c.resize(hi - r.low + 1);
        for (size_t k = 0; k < a.c.size(); ++k) r.c[a.low - r.low + k] += a.c[k];
        for (size_t k = 0; k < b.c.size(); ++k) r.c[b.low - r.low + k] += b.c[k];
        r.trim();
        return r;
    }
    Laurent operator-() const {
        Laurent r = *this;
        for (auto& x : r.c) x = -x;
        return r;
    }
    friend Laurent operator-(const Laurent& a, const Laurent& b) { return a + (-b); }
    friend Laurent operator*(const Laurent& a, const Laurent& b) {
        Laurent r;
        if (a.is_zero() || b.is_zero()) return r;
        r.low = a.low + b.low;
        r.c.resize(a.c.size() + b.c.size() - 1);
        for (size_t i = 0; i < a.c.size(); ++i)
            for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
        r.trim();
        return r;
    }
    Laurent scaled(const Gauss& g) const {
        if (g.is_zero()) return Laurent();
        Laurent r = *this;
        for (auto& x : r.c) x = x * g;
        return r;
    }
    Laurent shifted(int e) const {
        Laurent r = *this;
        if (!r.is_zero()) r.low += e;
        return r;
    }
    Laurent conj() const {
        Laurent r = *this;
        for (auto& x : r.c) x = x.conj();
        return r;
    }
    friend bool operator==(const Laurent& a, const Laurent& b) { return a.low == b.low && a.c == b.c; }

    std::complex<double> eval_s(double s) const {
        std::complex<double> acc = 0;
        for (size_t k = c.size(); k-- > 0;) acc = acc * s + c[k].value();
        return acc * std::pow(s, low);
    }
};

namespace detail {

// Ordinary polynomial helpers (exponents >= 0).
inline std::vector<Gauss> dense(const Laurent& a) {
    std::vector<Gauss> v(a.is_zero() ? 0 : a.high() + 1);
    for (size_t k = 0; k < a.c.size(); ++k) v[a.low + k] = a.c[k];
    return v;
}

inline Laurent from_dense(std::vector<Gauss> v) {
    Laurent r;
    r.c = std::move(v);
    r.trim();
    return r;
}

inline std::pair<Laurent, Laurent> divmod(const Laurent& a, const Laurent& b) {
    if (a.is_zero() || a.high() < b.high()) return {Laurent(), a};
    auto A = dense(a), B = dense(b);
    size_t db = B.size() - 1;
    std::vector<Gauss> quo(A.size() - db);
    Gauss lead_inv = B.back().inverse();
    for (size_t i = A.size(); i-- > db;) {
        if (A[i].is_zero()) continue;
        Gauss f = A[i] * lead_inv;
        for (size_t k = 0; k <= db; ++k) A[i - db + k] -= f * B[k];
        quo[i - db] = std::move(f);
    }
    A.resize(db);
    return {from_dense(std::move(quo)), from_dense(std::move(A))};
}

inline Laurent make_monic(const Laurent& a) { return a.scaled(a.c.back().inverse()); }

inline Laurent poly_gcd(Laurent a, Laurent b) {
    while (!b.is_zero()) {
        auto r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return make_monic(a);
}

}  // namespace detail

/// Exact element of Q(i)(s) with s^2 = q, kept in canonical reduced form.
class QScalar {
public:
    QScalar() : den_(Gauss(1)) {}
    QScalar(long v) : num_(Gauss(v)), den_(Gauss(1)) {}
    QScalar(const mpq_class& v) : num_(Gauss(v)), den_(Gauss(1)) {}
    QScalar(const Gauss& g) : num_(g), den_(Gauss(1)) {}
    QScalar(Laurent num, Laurent den) : num_(std::move(num)), den_(std::move(den)) { canonicalize(); }
    explicit QScalar(Laurent num) : num_(std::move(num)), den_(Gauss(1)) {}

    /// s^e = q^(e/2)
    static QScalar s_pow(int e, Gauss c = Gauss(1)) { return QScalar(Laurent(std::move(c), e)); }
    /// q^e
    static QScalar q_pow(int e) { return s_pow(2 * e); }
    static QScalar q() { return s_pow(2); }
    static QScalar i() { return QScalar(Gauss(0, 1)); }
    /// q - q^{-1}
    static QScalar lambda() { return q_pow(1) - q_pow(-1); }

    const Laurent& num() const { return num_; }
    const Laurent& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.c.size() == 1; }
    bool is_monomial() const { return is_polynomial() && num_.is_monomial(); }
    bool is_one() const { return is_monomial() && num_.low == 0 && num_.c[0].is_one(); }

    friend QScalar operator+(const QScalar& a, const QScalar& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.is_polynomial() && b.is_polynomial()) return QScalar(a.num_ + b.num_);
        if (a.den_ == b.den_) return QScalar(a.num_ + b.num_, a.den_);
        return QScalar(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    QScalar operator-() const {
        QScalar r = *this;
        r.num_ = -r.num_;
        return r;
    }
    friend QScalar operator-(const QScalar& a, const QScalar& b) { return a + (-b); }
    friend QScalar operator*(const QScalar& a, const QScalar& b) {
        if (a.is_zero() || b.is_zero()) return QScalar();
        if (a.is_polynomial() && b.is_polynomial()) return QScalar(a.num_ * b.num_);
        return QScalar(a.num_ * b.num_, a.den_ * b.den_);
    }
    QScalar inverse() const {
        if (is_zero()) throw domain_error("inversion of zero QScalar");
        return QScalar(den_, num_);
    }
    friend QScalar operator/(const QScalar& a, const QScalar& b) { return a * b.inverse(); }
    QScalar& operator+=(const QScalar& b) { return *this = *this + b; }
    QScalar& operator-=(const QScalar& b) { return *this = *this - b; }
    QScalar& operator*=(const QScalar& b) { return *this = *this * b; }

    /// Multiply by s^e without touching the denominator.
    QScalar times_s(int e) const {
        QScalar r = *this;
        r.num_ = r.num_.shifted(e);
        return r;
    }

    QScalar pow(int e) const {
        if (e < 0) return inverse().pow(-e);
        QScalar r(1), b = *this;
        while (e) {
            if (e & 1) r *= b;
            b *= b;
            e >>= 1;
        }
        return r;
    }

    QScalar conj() const {
        QScalar r;
        r.num_ = num_.conj();
        r.den_ = den_.conj();
        r.canonicalize();
        return r;
    }

    friend bool operator==(const QScalar& a, const QScalar& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

    std::complex<double> eval(double q) const {
        if (!(q > 0)) throw domain_error("eval requires q > 0");
        double s = std::sqrt(q);
        auto d = den_.eval_s(s);
        if (std::abs(d) == 0.0) throw domain_error("QScalar has a pole at q = " + std::to_string(q));
        return num_.eval_s(s) / d;
    }

    std::string str() const;

private:
    void canonicalize() {
        if (den_.is_zero()) throw domain_error("zero denominator");
        if (num_.is_zero()) { den_ = Laurent(Gauss(1)); return; }
        num_.low -= den_.low;
        den_.low = 0;
        if (den_.c.size() > 1) {
            int nl = num_.low;
            num_.low = 0;
            Laurent g = detail::poly_gcd(num_, den_);
            if (g.c.size() > 1) {
                num_ = detail::divmod(num_, g).first;
                den_ = detail::divmod(den_, g).first;
            }
            num_.low += nl;
        }
        Gauss c0 = den_.c.front();
        if (!c0.is_one()) {
            Gauss inv = c0.inverse();
            num_ = num_.scaled(inv);
            den_ = den_.scaled(inv);
        }
    }

    Laurent num_;
    Laurent den_;
};

inline std::string render_s_power(int e) {
    if (e == 0) return "";
    if (e % 2 == 0) {
        int k = e / 2;
        if (k == 1) return "q";
        if (k > 0) return "q^" + std::to_string(k);
        return "q^(" + std::to_string(k) + ")";
    }
    return "q^(" + std::to_string(e) + "/2)";
}

inline std::string render_laurent(const Laurent& p) {
    if (p.is_zero()) return "0";
    std::string out;
    for (int e = p.high(); e >= p.low; --e) {
        Gauss c = p.coeff(e);
        if (c.is_zero()) continue;
        if (!out.empty()) out += " + ";
        std::string qs = render_s_power(e);
        if (qs.empty()) out += render_gauss(c);
        else if (c.is_one()) out += qs;
        else out += render_gauss(c) + "*" + qs;
    }
    return out;
}

inline std::string QScalar::str() const {
    if (is_polynomial()) {
        Laurent n = num_.scaled(den_.c[0].inverse());
        return render_laurent(n);
    }
    return "(" + render_laurent(num_) + ")/(" + render_laurent(den_) + ")";
}

}  // namespace qball
