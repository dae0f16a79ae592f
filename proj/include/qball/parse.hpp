#pragma once

#include "qball/algebra.hpp"

#include <cctype>
#include <memory>
#include <string>
#include <vector>

namespace qball {

class parse_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Surface-syntax tree for expressions such as "(-1)*q^(3/2)*z1*Q2 + z1*^2".
struct Expr {
    enum Kind { Num, Imag, QVar, Z, ZS, QGen, Delta, PolyFn, Add, Sub, Mul, Div, Neg, Pow } kind;
    mpq_class num{0};       // Num value, Pow exponent
    int index = 0;          // generator index
    std::vector<int> ints;  // delta arguments
    std::vector<std::shared_ptr<Expr>> kids;
};
using ExprPtr = std::shared_ptr<Expr>;

namespace detail {

class Parser {
public:
    explicit Parser(std::string s) : s_(std::move(s)) {}

    ExprPtr parse() {
        auto e = expr();
        skip();
        if (p_ != s_.size()) fail("unexpected '" + std::string(1, s_[p_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw parse_error(msg + " at position " + std::to_string(p_) + " in \"" + s_ + "\"");
    }
    void skip() {
        while (p_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[p_]))) ++p_;
    }
    bool peek(char c) {
        skip();
        return p_ < s_.size() && s_[p_] == c;
    }
    bool eat(char c) {
        if (!peek(c)) return false;
        ++p_;
        return true;
    }
    static bool operand_start(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '(';
    }
    static ExprPtr node(Expr::Kind k, std::vector<ExprPtr> kids = {}) {
        auto e = std::make_shared<Expr>();
        e->kind = k;
        e->kids = std::move(kids);
        return e;
    }

    ExprPtr expr() {
        auto lhs = term();
        for (;;) {
            if (eat('+')) lhs = node(Expr::Add, {lhs, term()});
            else if (eat('-')) lhs = node(Expr::Sub, {lhs, term()});
            else return lhs;
        }
    }
    ExprPtr term() {
        auto lhs = unary();
        for (;;) {
            if (eat('*') || eat('.')) lhs = node(Expr::Mul, {lhs, unary()});
            else if (eat('/')) lhs = node(Expr::Div, {lhs, unary()});
            else return lhs;
        }
    }
    ExprPtr unary() {
        if (eat('-')) return node(Expr::Neg, {unary()});
        if (eat('+')) return unary();
        return power();
    }
    ExprPtr power() {
        auto base = primary();
        if (eat('^')) {
            auto e = node(Expr::Pow, {base});
            e->num = exponent();
            return e;
        }
        return base;
    }
    mpq_class exponent() {
        if (eat('(')) {
            bool neg = eat('-');
            mpq_class v = integer();
            if (eat('/')) v /= integer();
            if (!eat(')')) fail("expected ')' in exponent");
            return neg ? mpq_class(-v) : v;
        }
        bool neg = eat('-');
        mpq_class v = integer();
        return neg ? mpq_class(-v) : v;
    }
    long integer() {
        skip();
        size_t st = p_;
        while (p_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p_]))) ++p_;
        if (st == p_) fail("expected integer");
        return std::stol(s_.substr(st, p_ - st));
    }
    ExprPtr number() {
        size_t st = p_;
        while (p_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p_]))) ++p_;
        mpq_class v(s_.substr(st, p_ - st));
        if (p_ < s_.size() && s_[p_] == '.' && p_ + 1 < s_.size() &&
            std::isdigit(static_cast<unsigned char>(s_[p_ + 1]))) {
            ++p_;
            size_t fs = p_;
            while (p_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p_]))) ++p_;
            std::string frac = s_.substr(fs, p_ - fs);
            mpz_class scale = 1;
            for (size_t k = 0; k < frac.size(); ++k) scale *= 10;
            v += mpq_class(mpz_class(frac), scale);
            v.canonicalize();
        }
        auto e = node(Expr::Num);
        e->num = v;
        return e;
    }
    ExprPtr primary() {
        skip();
        if (p_ >= s_.size()) fail("unexpected end of input");
        char c = s_[p_];
        if (c == '(') {
            ++p_;
            auto e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return number();
        if (!std::isalpha(static_cast<unsigned char>(c))) fail("unexpected '" + std::string(1, c) + "'");
        size_t st = p_;
        while (p_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[p_]))) ++p_;
        std::string word = s_.substr(st, p_ - st);
        if (word == "q") return node(Expr::QVar);
        if (word == "i") return node(Expr::Imag);
        if (word == "z" || word == "Q") {
            if (p_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[p_])))
                fail("generator needs an index");
            int k = static_cast<int>(integer());
            auto e = node(word == "z" ? Expr::Z : Expr::QGen);
            e->index = k;
            if (word == "z" && p_ < s_.size() && s_[p_] == '*' &&
                !(p_ + 1 < s_.size() && operand_start(s_[p_ + 1]))) {
                ++p_;
                e->kind = Expr::ZS;
            }
            return e;
        }
        if (word == "delta") {
            if (!eat('(')) fail("expected '(' after delta");
            auto e = node(Expr::Delta);
            do {
                bool neg = eat('-');
                long v = integer();
                e->ints.push_back(static_cast<int>(neg ? -v : v));
            } while (eat(','));
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (word == "poly") {
            if (!eat('(')) fail("expected '(' after poly");
            auto e = node(Expr::PolyFn, {expr()});
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        p_ = st;
        fail("unknown symbol '" + word + "'");
    }

    std::string s_;
    size_t p_ = 0;
};

inline QScalar scalar_power(const QScalar& base, const mpq_class& e, bool base_is_q) {
    if (e.get_den() == 1) return base.pow(static_cast<int>(e.get_num().get_si()));
    if (base_is_q && e.get_den() == 2) return QScalar::s_pow(static_cast<int>(e.get_num().get_si()));
    throw parse_error("fractional exponent only allowed on q with denominator 2");
}

}  // namespace detail

inline ExprPtr parse_expr(const std::string& text) { return detail::Parser(text).parse(); }

inline QScalar eval_scalar(const ExprPtr& e) {
    switch (e->kind) {
        case Expr::Num: return QScalar(e->num);
        case Expr::Imag: return QScalar::i();
        case Expr::QVar: return QScalar::q();
        case Expr::Add: return eval_scalar(e->kids[0]) + eval_scalar(e->kids[1]);
        case Expr::Sub: return eval_scalar(e->kids[0]) - eval_scalar(e->kids[1]);
        case Expr::Mul: return eval_scalar(e->kids[0]) * eval_scalar(e->kids[1]);
        case Expr::Div: {
            QScalar d = eval_scalar(e->kids[1]);
            if (d.is_zero()) throw parse_error("division by zero");
            return eval_scalar(e->kids[0]) / d;
        }
        case Expr::Neg: return -eval_scalar(e->kids[0]);
        case Expr::Pow:
            return detail::scalar_power(eval_scalar(e->kids[0]), e->num, e->kids[0]->kind == Expr::QVar);
        default: throw parse_error("expression is not a scalar");
    }
}

inline QScalar parse_scalar(const std::string& text) { return eval_scalar(parse_expr(text)); }

inline bool is_scalar_expr(const ExprPtr& e) {
    switch (e->kind) {
        case Expr::Num: case Expr::Imag: case Expr::QVar: return true;
        case Expr::Z: case Expr::ZS: case Expr::QGen: case Expr::Delta: case Expr::PolyFn: return false;
        default:
            for (auto& k : e->kids)
                if (!is_scalar_expr(k)) return false;
            return true;
    }
}

inline AlgElement eval_algebra(const ExprPtr& e, int n) {
    if (is_scalar_expr(e)) return AlgElement(n, eval_scalar(e));
    switch (e->kind) {
        case Expr::Z: return AlgElement::z(n, e->index);
        case Expr::ZS: return AlgElement::zs(n, e->index);
        case Expr::QGen: return AlgElement::Q(n, e->index);
        case Expr::Add: return eval_algebra(e->kids[0], n) + eval_algebra(e->kids[1], n);
        case Expr::Sub: return eval_algebra(e->kids[0], n) - eval_algebra(e->kids[1], n);
        case Expr::Mul: return eval_algebra(e->kids[0], n) * eval_algebra(e->kids[1], n);
        case Expr::Neg: return -eval_algebra(e->kids[0], n);
        case Expr::Div: {
            if (!is_scalar_expr(e->kids[1])) throw parse_error("division by a non-scalar");
            QScalar d = eval_scalar(e->kids[1]);
            if (d.is_zero()) throw parse_error("division by zero");
            return d.inverse() * eval_algebra(e->kids[0], n);
        }
        case Expr::Pow: {
            if (e->num.get_den() != 1 || sgn(e->num) < 0)
                throw parse_error("algebra powers must be non-negative integers");
            return eval_algebra(e->kids[0], n).pow(static_cast<int>(e->num.get_num().get_si()));
        }
        default: throw parse_error("spectral coefficients need a series context");
    }
}

inline AlgElement parse_algebra(const std::string& text, int n) {
    try {
        return eval_algebra(parse_expr(text), n);
    } catch (const domain_error& ex) {
        throw parse_error(ex.what());
    }
}

}  // namespace qball
