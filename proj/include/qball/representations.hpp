#pragma once

#include "qball/action.hpp"

#include <Eigen/SparseCore>

#include <cmath>
#include <complex>
#include <optional>
#include <sstream>

namespace qball {

using cplx = std::complex<double>;
using SparseOp = Eigen::SparseMatrix<cplx>;

class unsupported_series : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A series (m,l,k) of *-representations with its numeric parameters.
/// The spectral parameter is stored as alpha with A = q^{2 alpha}, 0 <= alpha < 1/2.
struct SeriesConfig {
    int n = 1, m = 1, l = 0, k = 0;
    mpq_class alpha = 0;
    double vphase = 0;
    double q = 0.5;
    int N = 12;

    static SeriesConfig make(int n, int m, int l, int k, double q = 0.5, int N = 12, mpq_class alpha = 0) {
        SeriesConfig c;
        c.n = n, c.m = m, c.l = l, c.k = k, c.q = q, c.N = N, c.alpha = alpha;
        c.validate();
        return c;
    }
    /// Disc type (I).
    static SeriesConfig disc_type1(double q = 0.5, int N = 12) { return make(1, 1, 0, 0, q, N); }
    /// Disc type (II)_a with y eta_0 = -q^{2a}, 0 <= a < 1.
    static SeriesConfig disc_type2(const mpq_class& a, double q = 0.5, int N = 12) {
        return make(1, 0, 0, 1, q, N, a / 2);
    }

    void validate() const {
        if (n < 1) throw domain_error("n must be at least 1");
        if (m < 0 || l < 0 || k < 0 || m + l + k != n) throw domain_error("series (m,l,k) must satisfy m+l+k = n");
        if (!(q > 0 && q < 1)) throw domain_error("q must lie in (0,1)");
        if (N < 1) throw domain_error("cutoff must be positive");
        if (alpha < 0 || alpha >= mpq_class(1, 2)) throw domain_error("alpha must satisfy 0 <= alpha < 1/2");
    }

    /// Sign of Q_j: +1 positive block, 0 null block, -1 negative block; Q_{n+1} = 1.
    int eps(int j) const {
        if (j > n - m) return 1;
        if (j > k) return 0;
        return -1;
    }
    double A() const { return std::pow(q, 2 * alpha.get_d()); }
    cplx v() const { return std::polar(1.0, vphase); }
    std::string label() const {
        return "(" + std::to_string(m) + "," + std::to_string(l) + "," + std::to_string(k) + ")";
    }
    bool same_series(const SeriesConfig& o) const {
        return n == o.n && m == o.m && l == o.l && k == o.k && alpha == o.alpha;
    }
};

/// Every series (m,l,k) with m + l + k = n.
inline std::vector<SeriesConfig> all_series(int n, double q = 0.5, int N = 12, mpq_class alpha = mpq_class(1, 5)) {
    std::vector<SeriesConfig> out;
    for (int m = n; m >= 0; --m)
        for (int l = n - m; l >= 0; --l) out.push_back(SeriesConfig::make(n, m, l, n - m - l, q, N, alpha));
    return out;
}

/// Index window of the truncated basis eta_{i_n...i_1}; direction d holds i_{d+1}.
class Basis {
public:
    enum Kind { NonNeg, Integer, Positive, Absent };

    explicit Basis(const SeriesConfig& c) : n_(c.n) {
        for (int j = 1; j <= c.n; ++j) {
            if (j > c.n - c.m) add(NonNeg, 0, c.N);
            else if (j == c.k) add(Integer, -c.N, c.N);
            else if (j < c.k) add(Positive, 1, c.N);
            else add(Absent, 0, 0);
        }
        dim_ = 1;
        for (int d = n_ - 1; d >= 0; --d) {
            stride_[d] = dim_;
            dim_ *= hi_[d] - lo_[d] + 1;
        }
    }

    int dim() const { return dim_; }
    int n() const { return n_; }
    Kind kind(int j) const { return kind_[j - 1]; }

    std::vector<int> index(int flat) const {
        std::vector<int> i(n_);
        for (int d = 0; d < n_; ++d) {
            i[d] = lo_[d] + flat / stride_[d];
            flat %= stride_[d];
        }
        return i;
    }
    /// Flat position, or -1 outside the window.
    int flat(const std::vector<int>& i) const {
        int f = 0;
        for (int d = 0; d < n_; ++d) {
            if (i[d] < lo_[d] || i[d] > hi_[d]) return -1;
            f += (i[d] - lo_[d]) * stride_[d];
        }
        return f;
    }
    bool in_window(const std::vector<int>& i) const { return flat(i) >= 0; }

    /// Indices at distance >= margin from every truncation edge; spectral edges need no margin.
    std::vector<int> interior(int margin) const {
        std::vector<int> out;
        for (int f = 0; f < dim_; ++f) {
            auto i = index(f);
            bool ok = true;
            for (int d = 0; d < n_ && ok; ++d) {
                if (kind_[d] == Absent) continue;
                if (i[d] > hi_[d] - margin) ok = false;
                if (kind_[d] == Integer && i[d] < lo_[d] + margin) ok = false;
            }
            if (ok) out.push_back(f);
        }
        return out;
    }

private:
    void add(Kind k, int lo, int hi) {
        kind_.push_back(k);
        lo_.push_back(lo);
        hi_.push_back(hi);
        stride_.push_back(1);
    }
    int n_;
    int dim_ = 1;
    std::vector<Kind> kind_;
    std::vector<int> lo_, hi_, stride_;
};

inline SparseOp diagonal_op(const std::vector<cplx>& d) {
    SparseOp M(static_cast<int>(d.size()), static_cast<int>(d.size()));
    std::vector<Eigen::Triplet<cplx>> t;
    for (size_t i = 0; i < d.size(); ++i)
        if (d[i] != cplx(0)) t.emplace_back(static_cast<int>(i), static_cast<int>(i), d[i]);
    M.setFromTriplets(t.begin(), t.end());
    return M;
}

inline SparseOp identity_op(int dim) { return diagonal_op(std::vector<cplx>(dim, 1.0)); }

inline SparseOp adjoint(const SparseOp& M) { return SparseOp(M.adjoint()); }

/// Truncated realization of a series: z_j as weighted shifts, Q_j diagonal.
class Representation {
public:
    explicit Representation(SeriesConfig c) : cfg_(std::move(c)), basis_(cfg_) {
        cfg_.validate();
        for (int j = 1; j <= cfg_.n + 1; ++j) qdiag_.push_back(q_eigenvalues(j));
        for (int j = 1; j <= cfg_.n; ++j) {
            z_.push_back(build_z(j));
            zs_.push_back(adjoint(z_.back()));
        }
    }

    const SeriesConfig& config() const { return cfg_; }
    const Basis& basis() const { return basis_; }
    int dim() const { return basis_.dim(); }
    double q() const { return cfg_.q; }

    const SparseOp& z(int j) const { return z_.at(j - 1); }
    const SparseOp& zs(int j) const { return zs_.at(j - 1); }
    /// Eigenvalues of Q_j, 1 <= j <= n+1.
    const std::vector<double>& Qdiag(int j) const { return qdiag_.at(j - 1); }
    SparseOp Q(int j) const { return diagonal_op(std::vector<cplx>(Qdiag(j).begin(), Qdiag(j).end())); }
    SparseOp identity() const { return identity_op(dim()); }

    /// Diagonal operator of a function of the basis index.
    template <class Fn>
    SparseOp diag(Fn&& fn) const {
        std::vector<cplx> d(dim());
        for (int f = 0; f < dim(); ++f) d[f] = fn(f);
        return diagonal_op(d);
    }

    SparseOp evaluate(const QPoly& p) const {
        return diag([&](int f) {
            cplx s = 0;
            for (auto& [e, c] : p.terms()) {
                cplx v = c.eval(cfg_.q);
                for (int m = 0; m < cfg_.n; ++m)
                    if (e[m]) v *= std::pow(qdiag_[m][f], e[m]);
                s += v;
            }
            return s;
        });
    }

    SparseOp evaluate(const AlgElement& a) const {
        SparseOp r(dim(), dim());
        for (auto& [mono, p] : a.terms()) r += word(mono.I, false) * evaluate(p) * word(mono.J, true);
        return r;
    }

    /// One operator per normal-form summand c z^I Q^a z^{*J}; keeps residual scales honest under cancellation.
    std::vector<SparseOp> evaluate_terms(const AlgElement& a) const {
        std::vector<SparseOp> out;
        for (auto& [mono, p] : a.terms()) {
            SparseOp L = word(mono.I, false), Rw = word(mono.J, true);
            for (auto& [e, c] : p.terms()) {
                QPoly single(cfg_.n);
                single.add_term(e, c);
                out.push_back(L * evaluate(single) * Rw);
            }
        }
        return out;
    }

    /// z^I or z^{*J} in the fixed index order.
    SparseOp word(const Exps& e, bool star) const {
        SparseOp r = identity();
        for (int k = 0; k < cfg_.n; ++k)
            for (int c = 0; c < e[k]; ++c) r = SparseOp(r * (star ? zs(k + 1) : z(k + 1)));
        return r;
    }

private:
    std::vector<double> q_eigenvalues(int j) const {
        const int n = cfg_.n;
        std::vector<double> d(dim());
        double A2 = cfg_.A() * cfg_.A();
        for (int f = 0; f < dim(); ++f) {
            auto i = basis_.index(f);
            if (j == n + 1) d[f] = 1;
            else if (cfg_.eps(j) > 0) d[f] = std::pow(cfg_.q, 2 * sum(i, j, n));
            else if (cfg_.eps(j) == 0) d[f] = 0;
            else d[f] = -std::pow(cfg_.q, -2 * sum(i, j, cfg_.k) + 2 * sum(i, n - cfg_.m + 1, n)) * A2;
        }
        return d;
    }

    static int sum(const std::vector<int>& i, int from, int to) {
        int s = 0;
        for (int j = from; j <= to; ++j) s += i[j - 1];
        return s;
    }

    SparseOp build_z(int j) const {
        const int n = cfg_.n, k = cfg_.k, top = n - cfg_.m;
        const double q = cfg_.q, A = cfg_.A();
        auto lam = [q](int i) { return std::sqrt(std::max(0.0, 1 - std::pow(q, 2 * i))); };
        auto mu = [q](int i, double a) { return std::sqrt(1 + std::pow(q, -2 * i) * a); };
        auto beta = [q](int i) { return std::sqrt(std::max(0.0, std::pow(q, -2 * i) - 1)); };
        std::vector<Eigen::Triplet<cplx>> t;
        for (int f = 0; f < dim(); ++f) {
            auto i = basis_.index(f);
            int S = sum(i, top + 1, n);
            auto target = i;
            cplx c = 0;
            if (j > top) {
                c = std::pow(q, sum(i, j + 1, n)) * lam(i[j - 1] + 1);
                target[j - 1] += 1;
            } else if (cfg_.l == 0 && j == k) {
                c = std::pow(q, S) * mu(i[k - 1] - 1, A * A);
                target[k - 1] -= 1;
            } else if (cfg_.l > 0 && j == top) {
                c = std::pow(q, S) * cfg_.v();
                if (k > 0) target[k - 1] -= 1;
            } else if (j > k) {
                continue;
            } else if (j == k) {
                c = std::pow(q, -(i[k - 1] - 1) + S) * A;
                target[k - 1] -= 1;
            } else {
                c = std::pow(q, -sum(i, j + 1, k) + S) * beta(i[j - 1] - 1) * A;
                target[j - 1] -= 1;
            }
            int g = basis_.flat(target);
            if (g >= 0 && c != cplx(0)) t.emplace_back(g, f, c);
        }
        SparseOp M(dim(), dim());
        M.setFromTriplets(t.begin(), t.end());
        return M;
    }

    SeriesConfig cfg_;
    Basis basis_;
    std::vector<std::vector<double>> qdiag_;
    std::vector<SparseOp> z_, zs_;
};

/// Operators rho_l, A_l, B_l (l = 1..n) and Gamma of the operator expansion.
struct ExpansionOps {
    std::vector<SparseOp> rho, rho_inv, A, B;
    SparseOp Gamma;
};

inline ExpansionOps build_expansion_ops(const Representation& R) {
    const auto& c = R.config();
    if (c.l > 0) throw unsupported_series("expansion operators need a series (m,0,k)");
    const int n = c.n;
    const double q = c.q, lam = q - 1 / q;
    auto absq = [&](int j, double p) {
        return R.diag([&, j, p](int f) { return cplx(std::pow(std::abs(R.Qdiag(j)[f]), p)); });
    };
    ExpansionOps X;
    for (int l = 1; l <= n; ++l) {
        SparseOp rho, a, b;
        if (l < n) {
            rho = absq(l, 0.5) * absq(l + 1, -1) * absq(l + 2, 0.5);
            SparseOp qinv = R.diag([&](int f) { return cplx(1 / R.Qdiag(l + 1)[f]); });
            a = SparseOp((-std::pow(q, -2.5) / lam) * (qinv * R.zs(l + 1) * R.z(l)));
        } else {
            rho = n == 1 ? absq(1, 1) : SparseOp(absq(1, 0.5) * absq(n, 0.5));
            a = SparseOp((std::pow(q, -0.5) / lam) * R.z(n));
        }
        SparseOp rinv = R.diag([&](int f) { return 1.0 / rho.coeff(f, f); });
        b = SparseOp(rinv * adjoint(a));
        if (l == n) b = -b;
        X.rho.push_back(rho);
        X.rho_inv.push_back(rinv);
        X.A.push_back(a);
        X.B.push_back(b);
    }
    X.Gamma = R.diag([&](int f) {
        double g = std::pow(std::abs(R.Qdiag(1)[f]), -n);
        for (int j = 2; j <= n; ++j) g *= std::abs(R.Qdiag(j)[f]);
        return cplx(g);
    });
    return X;
}

/// Operator expansion X |> f realized by rho, A, B; returned as the list of summands.
inline std::vector<SparseOp> expansion_terms(const ExpansionOps& X, const Generator& g, const SparseOp& f, double q) {
    const int j = g.j - 1;
    const SparseOp &rho = X.rho.at(j), &rinv = X.rho_inv.at(j);
    switch (g.kind) {
        case Generator::K: return {rho * f * rinv};
        case Generator::Kinv: return {rinv * f * rho};
        case Generator::E: return {X.A[j] * f, -(rho * f * rinv * X.A[j])};
        default: return {X.B[j] * f * rho, -(q * q) * (f * rho * X.B[j])};
    }
}

inline SparseOp expansion_action(const ExpansionOps& X, const Generator& g, const SparseOp& f, double q) {
    auto t = expansion_terms(X, g, f, q);
    SparseOp r = t[0];
    for (size_t i = 1; i < t.size(); ++i) r += t[i];
    return r;
}

/// Residual of a relation sum_i T_i = 0: per column, |sum T_i e_c| / max_i |T_i e_c|, max over columns.
inline double relative_residual(const std::vector<SparseOp>& terms, const std::vector<int>& cols) {
    if (terms.empty()) return 0;
    const int dim = static_cast<int>(terms[0].rows());
    double worst = 0;
    std::vector<cplx> total(dim);
    std::vector<int> touched;
    for (int c : cols) {
        double scale = 0;
        for (auto& T : terms) {
            double part = 0;
            for (SparseOp::InnerIterator it(T, c); it; ++it) {
                part = std::max(part, std::abs(it.value()));
                if (total[it.row()] == cplx(0)) touched.push_back(static_cast<int>(it.row()));
                total[it.row()] += it.value();
            }
            scale = std::max(scale, part);
        }
        double r = 0;
        for (int i : touched) {
            r = std::max(r, std::abs(total[i]));
            total[i] = 0;
        }
        touched.clear();
        if (scale > 0) worst = std::max(worst, r / scale);
    }
    return worst;
}

/// One relation-check outcome: {relation-id, series, N, margin, residual, pass}.
struct ResidualRecord {
    std::string relation, series;
    int N = 0, margin = 0;
    double residual = 0;
    bool pass = false;
};

namespace detail {

struct RelationCollector {
    const Representation& R;
    std::vector<int> cols;
    int margin;
    double tol;
    std::vector<ResidualRecord> out;

    void check(const std::string& id, std::vector<SparseOp> terms) {
        double r = relative_residual(terms, cols);
        out.push_back({id, R.config().label(), R.config().N, margin, r, r <= tol});
    }
};

inline std::string idx(int a) { return std::to_string(a); }
inline std::string idx(int a, int b) { return std::to_string(a) + "," + std::to_string(b); }

}  // namespace detail

/// Interior residuals of the defining relations and, for (m,0,k), of the expansion-operator relations.
inline std::vector<ResidualRecord> verify_relations(const Representation& R, int margin, double tol = 1e-12) {
    const int n = R.config().n;
    const double q = R.q(), q2 = q * q;
    detail::RelationCollector C{R, R.basis().interior(margin), margin, tol, {}};
    const SparseOp I = R.identity();
    auto z = [&](int j) -> const SparseOp& { return R.z(j); };
    auto zs = [&](int j) -> const SparseOp& { return R.zs(j); };
    using detail::idx;
    for (int k = 1; k <= n; ++k)
        for (int l = 1; l <= n; ++l) {
            if (k < l) C.check("ball1[" + idx(k, l) + "]", {z(k) * z(l), -q * z(l) * z(k)});
            if (k != l) C.check("ball2[" + idx(k, l) + "]", {zs(l) * z(k), -q * z(k) * zs(l)});
        }
    for (int k = 1; k <= n; ++k) {
        std::vector<SparseOp> t{zs(k) * z(k), -q2 * z(k) * zs(k), -(1 - q2) * I};
        for (int j = k + 1; j <= n; ++j) t.push_back((1 - q2) * z(j) * zs(j));
        C.check((k < n ? "ball3[" : "ball4[") + idx(k) + "]", t);
        std::vector<SparseOp> qdef{R.Q(k), -I};
        for (int j = k; j <= n; ++j) qdef.push_back(z(j) * zs(j));
        C.check("Q[" + idx(k) + "]", qdef);
        C.check("zzQ[" + idx(k) + "]", {zs(k) * z(k), -q2 * z(k) * zs(k), -(1 - q2) * R.Q(k + 1)});
        C.check("zQQ[" + idx(k) + "]", {z(k) * zs(k), -R.Q(k + 1), R.Q(k)});
        C.check("zQQ*[" + idx(k) + "]", {zs(k) * z(k), -R.Q(k + 1), q2 * R.Q(k)});
        for (int j = 1; j <= n; ++j) {
            double f = j >= k ? q2 : 1.0;
            C.check("Qz[" + idx(k, j) + "]", {R.Q(k) * z(j), -f * z(j) * R.Q(k)});
            C.check("Qz*[" + idx(k, j) + "]", {R.Q(k) * zs(j), -(1 / f) * zs(j) * R.Q(k)});
            C.check("QQ[" + idx(k, j) + "]", {R.Q(k) * R.Q(j), -R.Q(j) * R.Q(k)});
        }
    }
    if (R.config().l > 0) return C.out;

    auto X = build_expansion_ops(R);
    const double lam = q - 1 / q;
    auto Ao = [&](int j) -> const SparseOp& { return X.A[j - 1]; };
    auto Bo = [&](int j) -> const SparseOp& { return X.B[j - 1]; };
    auto rho = [&](int j) -> const SparseOp& { return X.rho[j - 1]; };
    auto eps = [&](int j) { return j > n ? 1 : R.config().eps(j); };
    for (int i = 1; i <= n; ++i) {
        C.check("AB1:rhoinv[" + idx(i) + "]", {X.rho_inv[i - 1] * rho(i), -I});
        for (int j = 1; j <= n; ++j) {
            double a = std::pow(q, cartan(i, j));
            C.check("AB1:rhorho[" + idx(i, j) + "]", {rho(i) * rho(j), -rho(j) * rho(i)});
            C.check("AB1:rhoA[" + idx(i, j) + "]", {rho(i) * Ao(j), -a * Ao(j) * rho(i)});
            C.check("AB1:rhoB[" + idx(i, j) + "]", {rho(i) * Bo(j), -(1 / a) * Bo(j) * rho(i)});
            if (i == j) continue;
            if (std::abs(i - j) != 1) {
                C.check("AB2:comm[" + idx(i, j) + "]", {Ao(i) * Ao(j), -Ao(j) * Ao(i)});
                C.check("AB3:comm[" + idx(i, j) + "]", {Bo(i) * Bo(j), -Bo(j) * Bo(i)});
            } else {
                double s = q + 1 / q;
                C.check("AB2:serre[" + idx(i, j) + "]",
                        {Ao(i) * Ao(i) * Ao(j), -s * Ao(i) * Ao(j) * Ao(i), Ao(j) * Ao(i) * Ao(i)});
                C.check("AB3:serre[" + idx(i, j) + "]",
                        {Bo(i) * Bo(i) * Bo(j), -s * Bo(i) * Bo(j) * Bo(i), Bo(j) * Bo(i) * Bo(i)});
            }
            C.check("AB4:AB[" + idx(i, j) + "]", {Ao(i) * Bo(j), -Bo(j) * Ao(i)});
        }
    }
    for (int j = 1; j < n; ++j)
        C.check("AB4[" + idx(j) + "]", {Ao(j) * Bo(j), -Bo(j) * Ao(j), -(eps(j + 2) * eps(j) / lam) * rho(j),
                                        (1 / lam) * X.rho_inv[j - 1]});
    C.check("AB5", {Ao(n) * Bo(n), -Bo(n) * Ao(n), (1 / lam) * X.rho_inv[n - 1]});
    return C.out;
}

/// Operator forms satisfying x x^* - q^2 x^* x = eps (1 - q^2).
struct QHypForm {
    enum Kind { I, II, III, Minus } kind = I;
    double A = 1;      // form II, A in (q^2, 1]
    double theta = 0;  // form III, x = e^{i theta}

    int epsilon() const { return kind == Minus ? -1 : 1; }
};

struct QHypOp {
    SparseOp x;
    std::vector<int> index;  // basis label of each row
    std::vector<int> interior(int margin) const {
        std::vector<int> out;
        int lo = index.front(), hi = index.back();
        for (int f = 0; f < static_cast<int>(index.size()); ++f) {
            int i = index[f];
            if (i > hi - margin) continue;
            if (lo < 0 && i < lo + margin) continue;
            out.push_back(f);
        }
        return out;
    }
};

inline QHypOp build_qhyp(const QHypForm& form, double q, int N) {
    if (!(q > 0 && q < 1) || N < 1) throw domain_error("invalid q or cutoff");
    QHypOp r;
    std::vector<Eigen::Triplet<cplx>> t;
    switch (form.kind) {
        case QHypForm::I:
            for (int i = 0; i <= N; ++i) r.index.push_back(i);
            for (int i = 1; i <= N; ++i) t.emplace_back(i - 1, i, std::sqrt(1 - std::pow(q, 2 * i)));
            break;
        case QHypForm::II:
            if (!(form.A > q * q && form.A <= 1)) throw domain_error("form II needs A in (q^2, 1]");
            for (int i = -N; i <= N; ++i) r.index.push_back(i);
            for (int i = -N + 1; i <= N; ++i)
                t.emplace_back(i - 1 + N, i + N, std::sqrt(1 + std::pow(q, 2 * i) * form.A));
            break;
        case QHypForm::III:
            r.index.push_back(0);
            t.emplace_back(0, 0, std::polar(1.0, form.theta));
            break;
        case QHypForm::Minus:
            for (int i = 1; i <= N; ++i) r.index.push_back(i);
            for (int i = 1; i < N; ++i) t.emplace_back(i, i - 1, std::sqrt(std::pow(q, -2 * i) - 1));
            break;
    }
    int dim = static_cast<int>(r.index.size());
    r.x.resize(dim, dim);
    r.x.setFromTriplets(t.begin(), t.end());
    return r;
}

inline double qhyp_residual(const QHypForm& form, double q, int N, int margin) {
    auto op = build_qhyp(form, q, N);
    SparseOp xs = adjoint(op.x);
    SparseOp I = identity_op(static_cast<int>(op.index.size()));
    return relative_residual({op.x * xs, -(q * q) * xs * op.x, -(form.epsilon() * (1 - q * q)) * I},
                             op.interior(margin));
}

}  // namespace qball
