#pragma once

#include "qball/algebra.hpp"

#include <random>

namespace qball {

/// Seeded generator of small exact test inputs.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : rng_(seed) {}

    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    QScalar scalar(int terms = 2, bool gaussian = false) {
        QScalar r;
        while (r.is_zero()) {
            int k = uniform(1, terms);
            for (int j = 0; j < k; ++j) {
                int c = uniform(-3, 3);
                int ci = gaussian ? uniform(-1, 1) : 0;
                if (c == 0 && ci == 0) c = 1;
                r += QScalar::s_pow(uniform(-3, 3), Gauss(c, ci));
            }
        }
        return r;
    }

    /// Normal-form monomial with word length |I| + |J| + |a| <= max_degree.
    std::pair<Monomial, Exps> monomial(int n, int max_degree) {
        Monomial m{Exps(n, 0), Exps(n, 0)};
        Exps a(n, 0);
        int len = uniform(0, max_degree);
        for (int s = 0; s < len; ++s) {
            int k = uniform(0, n - 1);
            switch (uniform(0, 2)) {
                case 0: if (m.J[k] == 0) m.I[k]++; break;
                case 1: if (m.I[k] == 0) m.J[k]++; break;
                default: a[k]++;
            }
        }
        return {m, a};
    }

    AlgElement element(int n, int max_degree, int max_terms = 3, bool gaussian = false) {
        AlgElement f(n);
        int t = uniform(1, max_terms);
        for (int j = 0; j < t; ++j) {
            auto [m, a] = monomial(n, max_degree);
            QPoly p(n);
            p.add_term(a, scalar(2, gaussian));
            f.add(m, p);
        }
        return f;
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

}  // namespace qball
