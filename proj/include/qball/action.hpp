#pragma once

#include "qball/algebra.hpp"

#include <string>
#include <vector>

namespace qball {

class resource_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Generator {
    enum Kind { K, Kinv, E, F } kind;
    int j = 1;

    bool operator==(const Generator&) const = default;

    std::string name() const {
        static const char* names[] = {"K", "Kinv", "E", "F"};
        return names[kind] + std::to_string(j);
    }

    static Generator parse(const std::string& s) {
        auto num = [&](size_t from) {
            if (from >= s.size()) throw domain_error("generator index missing in '" + s + "'");
            for (size_t k = from; k < s.size(); ++k)
                if (!std::isdigit(static_cast<unsigned char>(s[k]))) throw domain_error("bad generator '" + s + "'");
            return std::stoi(s.substr(from));
        };
        if (s.rfind("Kinv", 0) == 0) return {Kinv, num(4)};
        if (s.rfind("K", 0) == 0) return {K, num(1)};
        if (s.rfind("E", 0) == 0) return {E, num(1)};
        if (s.rfind("F", 0) == 0) return {F, num(1)};
        throw domain_error("unknown generator '" + s + "'");
    }
};

/// Scaled product X_1 X_2 ... X_r of generators; acts right-to-left.
struct GeneratorWord {
    QScalar prefactor{1};
    std::vector<Generator> gens;
};

/// Cartan matrix entry of sl(n+1), 1-based.
inline int cartan(int i, int j) {
    if (i == j) return 2;
    return std::abs(i - j) == 1 ? -1 : 0;
}

inline std::vector<Generator> all_generators(int n) {
    std::vector<Generator> gs;
    for (int j = 1; j <= n; ++j)
        for (auto k : {Generator::K, Generator::Kinv, Generator::E, Generator::F}) gs.push_back({k, j});
    return gs;
}

inline QScalar counit(const Generator& g) { return (g.kind == Generator::K || g.kind == Generator::Kinv) ? 1 : 0; }

inline QScalar counit(const GeneratorWord& w) {
    QScalar r = w.prefactor;
    for (auto& g : w.gens) r *= counit(g);
    return r;
}

/// S(g)^* as a scaled generator.
inline std::pair<QScalar, Generator> antipode_star(const Generator& g, int n) {
    QScalar sign = g.j == n ? 1 : -1;
    switch (g.kind) {
        case Generator::K: return {1, {Generator::Kinv, g.j}};
        case Generator::Kinv: return {1, {Generator::K, g.j}};
        case Generator::E: return {sign * QScalar::q_pow(-2), {Generator::F, g.j}};
        default: return {sign * QScalar::q_pow(2), {Generator::E, g.j}};
    }
}

/// The U_q(su(n,1)) action on O_q(Mat_{n,1}) through generator tables and the twisted Leibniz rule.
class UqAction {
public:
    explicit UqAction(int n, int degree_guard = 12) : n_(n), guard_(degree_guard) {
        for (int j = 1; j <= n; ++j) {
            std::vector<AlgElement> qe, qf;
            for (int k = 1; k <= n; ++k) {
                AlgElement e(n), f(n);
                for (int i = k; i <= n; ++i) {
                    auto z = AlgElement::z(n, i), zs = AlgElement::zs(n, i);
                    e += letter_action({Generator::E, j}, i, false) * zs +
                         weight_factor(j, i, false) * (z * letter_action({Generator::E, j}, i, true));
                    f += letter_action({Generator::F, j}, i, false) * (weight_factor(j, i, true).inverse() * zs) +
                         z * letter_action({Generator::F, j}, i, true);
                }
                qe.push_back(-e);
                qf.push_back(-f);
            }
            q_action_e_.push_back(std::move(qe));
            q_action_f_.push_back(std::move(qf));
        }
    }

    int n() const { return n_; }

    /// K_j weight of z_i: K_j > z_i = q^{w} z_i, K_j > z_i^* = q^{-w} z_i^*.
    int weight(int j, int i) const {
        if (j == n_) return i == n_ ? 2 : 1;
        if (i == j) return 1;
        if (i == j + 1) return -1;
        return 0;
    }

    AlgElement apply(const Generator& g, const AlgElement& f) const {
        if (g.j < 1 || g.j > n_) throw domain_error("generator index out of range: " + g.name());
        if (f.n() != n_ && !f.is_zero()) throw domain_error("dimension mismatch in action");
        AlgElement r(n_);
        for (auto& [m, p] : f.terms()) {
            if (m.z_degree() + 2 * p.degree() > guard_)
                throw resource_error("degree guard exceeded: total z-degree " +
                                     std::to_string(m.z_degree() + 2 * p.degree()) + " > " + std::to_string(guard_));
            for (auto& [a, c] : p.terms()) r += apply_term(g, m, a, c);
        }
        return r;
    }

    AlgElement apply(const GeneratorWord& w, const AlgElement& f) const {
        AlgElement r = f;
        for (size_t k = w.gens.size(); k-- > 0;) r = apply(w.gens[k], r);
        return w.prefactor * r;
    }

private:
    QScalar weight_factor(int j, int i, bool star) const { return QScalar::q_pow(star ? -weight(j, i) : weight(j, i)); }

    AlgElement letter_action(const Generator& g, int i, bool star) const {
        const int n = n_, j = g.j;
        auto z = [&](int k) { return AlgElement::z(n, k); };
        auto zs = [&](int k) { return AlgElement::zs(n, k); };
        AlgElement zero(n);
        switch (g.kind) {
            case Generator::K: return weight_factor(j, i, star) * (star ? zs(i) : z(i));
            case Generator::Kinv: return weight_factor(j, i, !star) * (star ? zs(i) : z(i));
            case Generator::E:
                if (j < n) {
                    if (!star && i == j + 1) return QScalar::s_pow(-1) * z(j);
                    if (star && i == j) return QScalar::s_pow(-3, Gauss(-1)) * zs(j + 1);
                    return zero;
                }
                if (!star) return QScalar::s_pow(1, Gauss(-1)) * (z(n) * z(i));
                return i == n ? AlgElement(n, QScalar::s_pow(-3)) : zero;
            case Generator::F:
                if (j < n) {
                    if (!star && i == j) return QScalar::s_pow(1) * z(j + 1);
                    if (star && i == j + 1) return QScalar::s_pow(3, Gauss(-1)) * zs(j);
                    return zero;
                }
                if (!star) return i == n ? AlgElement(n, QScalar::s_pow(1)) : zero;
                return QScalar::s_pow(5, Gauss(-1)) * (zs(i) * zs(n));
        }
        return zero;
    }

    struct Letter {
        int kind;  // 0 z, 1 Q, 2 z*
        int index;
    };

    AlgElement letter_elem(const Letter& l) const {
        if (l.kind == 0) return AlgElement::z(n_, l.index);
        if (l.kind == 1) return AlgElement::Q(n_, l.index);
        return AlgElement::zs(n_, l.index);
    }

    int letter_weight(int j, const Letter& l) const {
        if (l.kind == 1) return 0;
        return l.kind == 0 ? weight(j, l.index) : -weight(j, l.index);
    }

    AlgElement letter_act(const Generator& g, const Letter& l) const {
        if (l.kind == 1) {
            if (g.kind == Generator::E) return q_action_e_[g.j - 1][l.index - 1];
            if (g.kind == Generator::F) return q_action_f_[g.j - 1][l.index - 1];
            return letter_elem(l);
        }
        return letter_action(g, l.index, l.kind == 2);
    }

    AlgElement apply_term(const Generator& g, const Monomial& m, const Exps& a, const QScalar& c) const {
        QPoly unit(n_, QScalar(1));
        QPoly mono(n_);
        mono.add_term(a, c);
        if (g.kind == Generator::K || g.kind == Generator::Kinv) {
            int w = 0;
            for (int i = 1; i <= n_; ++i) w += (m.I[i - 1] - m.J[i - 1]) * weight(g.j, i);
            if (g.kind == Generator::Kinv) w = -w;
            return AlgElement::from_term(n_, m, mono.scaled(QScalar::q_pow(w)));
        }
        std::vector<Letter> word;
        for (int i = 1; i <= n_; ++i)
            for (int r = 0; r < m.I[i - 1]; ++r) word.push_back({0, i});
        for (int k = 1; k <= n_; ++k)
            for (int r = 0; r < a[k - 1]; ++r) word.push_back({1, k});
        for (int i = 1; i <= n_; ++i)
            for (int r = 0; r < m.J[i - 1]; ++r) word.push_back({2, i});

        const size_t len = word.size();
        std::vector<AlgElement> prefix(len + 1, AlgElement::one(n_)), suffix(len + 1, AlgElement::one(n_));
        std::vector<int> pw(len + 1, 0), sw(len + 1, 0);
        for (size_t t = 0; t < len; ++t) {
            prefix[t + 1] = prefix[t] * letter_elem(word[t]);
            pw[t + 1] = pw[t] + letter_weight(g.j, word[t]);
        }
        for (size_t t = len; t-- > 0;) {
            suffix[t] = letter_elem(word[t]) * suffix[t + 1];
            sw[t] = sw[t + 1] + letter_weight(g.j, word[t]);
        }
        AlgElement r(n_);
        for (size_t t = 0; t < len; ++t) {
            AlgElement d = letter_act(g, word[t]);
            if (d.is_zero()) continue;
            if (g.kind == Generator::E)
                r += QScalar::q_pow(pw[t]) * (prefix[t] * d * suffix[t + 1]);
            else
                r += QScalar::q_pow(-sw[t + 1]) * (prefix[t] * d * suffix[t + 1]);
        }
        return c * r;
    }

    int n_;
    int guard_;
    std::vector<std::vector<AlgElement>> q_action_e_, q_action_f_;
};

/// One line of a residual report.
struct Residual {
    std::string relation;
    AlgElement value;
    bool pass() const { return value.is_zero(); }
};

/// gen > (f g) - expansion by the coproduct, gen > 1 - eps(gen) 1, (gen > f)^* - S(gen)^* > f^*.
inline std::vector<Residual> verify_module_algebra(const UqAction& act, const AlgElement& f, const AlgElement& g,
                                                   const Generator& gen) {
    const int n = act.n();
    std::vector<Residual> out;
    AlgElement lhs = act.apply(gen, f * g), rhs(n);
    switch (gen.kind) {
        case Generator::K:
        case Generator::Kinv: rhs = act.apply(gen, f) * act.apply(gen, g); break;
        case Generator::E: rhs = act.apply(gen, f) * g + act.apply({Generator::K, gen.j}, f) * act.apply(gen, g); break;
        case Generator::F: rhs = act.apply(gen, f) * act.apply({Generator::Kinv, gen.j}, g) + f * act.apply(gen, g); break;
    }
    out.push_back({"modalg:" + gen.name(), lhs - rhs});
    out.push_back({"modeins:" + gen.name(), act.apply(gen, AlgElement::one(n)) - AlgElement(n, counit(gen))});
    auto [c, sg] = antipode_star(gen, n);
    out.push_back({"modstar:" + gen.name(), act.apply(gen, f).star() - c * act.apply(sg, f.star())});
    return out;
}

/// A defining relation written as sum_k c_k w_k = 0.
struct UqRelation {
    std::string id;
    std::vector<GeneratorWord> terms;
};

inline std::vector<UqRelation> uq_relations(int n) {
    using G = Generator;
    std::vector<UqRelation> rels;
    auto w = [](QScalar c, std::vector<G> g) { return GeneratorWord{std::move(c), std::move(g)}; };
    const QScalar qq = QScalar::q() + QScalar::q_pow(-1);
    const QScalar li = QScalar::lambda().inverse();
    for (int i = 1; i <= n; ++i) {
        rels.push_back({"sut1:K" + std::to_string(i) + "Kinv", {w(1, {{G::K, i}, {G::Kinv, i}}), w(-1, {})}});
        rels.push_back({"sut1:Kinv" + std::to_string(i) + "K", {w(1, {{G::Kinv, i}, {G::K, i}}), w(-1, {})}});
        for (int j = 1; j <= n; ++j) {
            std::string ij = std::to_string(i) + "," + std::to_string(j);
            int a = cartan(i, j);
            if (i < j) rels.push_back({"sut1:KK" + ij, {w(1, {{G::K, i}, {G::K, j}}), w(-1, {{G::K, j}, {G::K, i}})}});
            rels.push_back({"sut1:KE" + ij, {w(1, {{G::K, i}, {G::E, j}}), w(-QScalar::q_pow(a), {{G::E, j}, {G::K, i}})}});
            rels.push_back({"sut1:KF" + ij, {w(1, {{G::K, i}, {G::F, j}}), w(-QScalar::q_pow(-a), {{G::F, j}, {G::K, i}})}});
            if (i == j)
                rels.push_back({"sut2:EF" + ij,
                                {w(1, {{G::E, i}, {G::F, i}}), w(-1, {{G::F, i}, {G::E, i}}), w(-li, {{G::K, i}}),
                                 w(li, {{G::Kinv, i}})}});
            else
                rels.push_back({"sut4:EF" + ij, {w(1, {{G::E, i}, {G::F, j}}), w(-1, {{G::F, j}, {G::E, i}})}});
            if (i == j) continue;
            for (auto X : {G::E, G::F}) {
                std::string tag = X == G::E ? "E" : "F";
                if (std::abs(i - j) == 1)
                    rels.push_back({"sut3:serre" + tag + ij,
                                    {w(1, {{X, i}, {X, i}, {X, j}}), w(-qq, {{X, i}, {X, j}, {X, i}}),
                                     w(1, {{X, j}, {X, i}, {X, i}})}});
                else if (i < j)
                    rels.push_back({"sut3:comm" + tag + ij, {w(1, {{X, i}, {X, j}}), w(-1, {{X, j}, {X, i}})}});
            }
        }
    }
    return rels;
}

inline std::vector<Residual> verify_uq_relations(const UqAction& act, const AlgElement& f) {
    std::vector<Residual> out;
    for (auto& rel : uq_relations(act.n())) {
        AlgElement r(act.n());
        for (auto& w : rel.terms) r += act.apply(w, f);
        out.push_back({rel.id, r});
    }
    return out;
}

}  // namespace qball
