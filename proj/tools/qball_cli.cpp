#include "qball/suites.hpp"

#include <CLI11.hpp>
#include <iostream>
#include <json.hpp>

using namespace qball;
using nlohmann::json;

namespace {

struct RunConfig {
    int n = 1;
    std::string series, alpha = "0", format = "text", expr;
    double vphase = 0, q = 0.5, tol = 1e-10;
    int cutoff = 12, margin = 4;
    std::uint64_t seed = 1;
};

class usage_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

mpq_class parse_rational(const std::string& s) {
    try {
        if (s.find('/') != std::string::npos) {
            mpq_class r(s);
            r.canonicalize();
            return r;
        }
        auto dot = s.find('.');
        if (dot == std::string::npos) return mpq_class(mpz_class(s));
        std::string frac = s.substr(dot + 1), whole = s.substr(0, dot);
        bool neg = !whole.empty() && whole[0] == '-';
        if (neg) whole.erase(0, 1);
        mpz_class den = 1;
        for (size_t k = 0; k < frac.size(); ++k) den *= 10;
        mpq_class r(mpz_class((whole.empty() ? "0" : whole) + frac), den);
        r.canonicalize();
        return neg ? mpq_class(-r) : r;
    } catch (const std::invalid_argument&) {
        throw usage_error("bad rational '" + s + "'");
    }
}

SeriesConfig series_config(const RunConfig& rc) {
    SeriesConfig c;
    c.n = rc.n;
    if (rc.series.empty()) {
        c.m = rc.n;
    } else {
        std::vector<int> v;
        std::stringstream ss(rc.series);
        for (std::string part; std::getline(ss, part, ',');) {
            try {
                size_t used = 0;
                v.push_back(std::stoi(part, &used));
                if (used != part.size()) throw std::invalid_argument(part);
            } catch (const std::exception&) {
                throw usage_error("bad --series '" + rc.series + "'");
            }
        }
        if (v.size() != 3) throw usage_error("--series takes m,l,k");
        c.m = v[0], c.l = v[1], c.k = v[2];
    }
    mpq_class a = parse_rational(rc.alpha);
    if (rc.n == 1) {
        if (a < 0 || a >= 1) throw usage_error("disc parameter a must satisfy 0 <= a < 1");
        a /= 2;
    }
    c.alpha = a;
    c.vphase = rc.vphase;
    c.q = rc.q;
    c.N = rc.cutoff;
    c.validate();
    return c;
}

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

json result_json(const IntegralResult& r, const mpq_class& alpha) {
    json j;
    j["mode"] = r.mode;
    j["series"] = r.series;
    j["c"] = r.c.str();
    j["value"] = r.value.real();
    j["value_imag"] = r.value.imag();
    j["exact"] = r.exact ? json(r.exact_str(alpha)) : json(nullptr);
    j["tail_bound"] = r.tail_bound;
    j["divergent"] = r.divergent;
    j["note"] = r.note;
    return j;
}

void print_result(const IntegralResult& r, const mpq_class& alpha, const std::string& format) {
    if (format == "json") {
        std::cout << result_json(r, alpha).dump(2) << "\n";
        return;
    }
    if (r.divergent) {
        std::cout << "divergent: " << r.note << "\n";
    } else {
        std::cout << (r.exact ? r.exact_str(alpha) : fmt(r.value.real())) << "\n";
        std::cout << "value = " << fmt(r.value.real());
        if (r.value.imag() != 0) std::cout << " + " << fmt(r.value.imag()) << "i";
        std::cout << "\n";
    }
    std::cout << "mode = " << r.mode << "\nc = " << r.c.str() << "\ntail_bound = " << fmt(r.tail_bound)
              << "\nseries = " << r.series << "\n";
}

int cmd_normalize(const RunConfig& rc) {
    AlgElement f = parse_algebra(rc.expr, rc.n);
    if (rc.format == "json")
        std::cout << json{{"command", "normalize"}, {"n", rc.n}, {"input", rc.expr}, {"result", f.str()}}.dump(2)
                  << "\n";
    else
        std::cout << f.str() << "\n";
    return 0;
}

int cmd_act(const RunConfig& rc, const std::string& gens) {
    GeneratorWord w;
    std::stringstream ss(gens);
    for (std::string g; std::getline(ss, g, ',');) {
        try {
            w.gens.push_back(Generator::parse(g));
        } catch (const domain_error& e) {
            throw usage_error(e.what());
        }
        if (w.gens.back().j > rc.n) throw usage_error("generator index out of range: " + g);
    }
    if (w.gens.empty()) throw usage_error("--gen is empty");
    AlgElement f = parse_algebra(rc.expr, rc.n);
    AlgElement r = UqAction(rc.n).apply(w, f);
    if (rc.format == "json")
        std::cout << json{{"command", "act"}, {"n", rc.n}, {"gen", gens}, {"input", rc.expr}, {"result", r.str()}}.dump(2)
                  << "\n";
    else
        std::cout << r.str() << "\n";
    return 0;
}

int cmd_integrate(const RunConfig& rc, const std::string& mode, const std::string& c_text) {
    QScalar c = parse_scalar(c_text);
    IntegralResult r;
    mpq_class alpha = 0;
    if (mode == "compact") {
        if (rc.n < 2) throw usage_error("compact mode needs n >= 2");
        if (c_text != "1") throw usage_error("compact mode fixes c by h(1) = 1");
        r = h_compact(parse_algebra(rc.expr, rc.n), rc.q);
    } else {
        SeriesConfig cfg = series_config(rc);
        alpha = cfg.alpha;
        auto ctx = SpectralContext::from(cfg);
        SpectralElement f = parse_spectral(rc.expr, ctx);
        if (mode == "closed") {
            r = h_closed(f, rc.q, c);
        } else if (mode == "trace") {
            r = h_trace(f, Representation(cfg), c);
        } else if (mode == "jackson") {
            if (rc.n != 1) throw usage_error("jackson mode is defined for the disc (n = 1)");
            try {
                r = h_disc(f, rc.q, rc.tol, c);
            } catch (const divergence_error& e) {
                r.mode = "jackson", r.c = c, r.series = cfg.label(), r.divergent = true, r.note = e.what();
                r.value = std::numeric_limits<double>::infinity();
            }
        } else {
            throw usage_error("unknown --mode '" + mode + "'");
        }
    }
    print_result(r, alpha, rc.format);
    return 0;
}

int cmd_verify(const RunConfig& rc, const std::string& suite, int samples, bool fault) {
    static const std::set<std::string> suites{"algebra", "action", "relations", "invariance", "fodc", "all"};
    if (!suites.count(suite)) throw usage_error("unknown --suite '" + suite + "'");
    VerifyConfig v;
    v.series = series_config(rc);
    v.margin = rc.margin;
    v.tol = rc.tol;
    v.seed = rc.seed;
    v.samples = samples;
    v.inject_fault = fault;
    auto records = run_suite(suite, v);
    int passed = 0, failed = 0, skipped = 0;
    for (auto& r : records) (r.skipped ? skipped : r.pass ? passed : failed)++;
    if (rc.format == "json") {
        json rs = json::array();
        for (auto& r : records)
            rs.push_back({{"suite", r.suite}, {"check", r.check}, {"series", r.series}, {"residual", r.residual},
                          {"pass", r.pass}, {"skipped", r.skipped}, {"detail", r.detail}});
        std::cout << json{{"command", "verify"},
                          {"suite", suite},
                          {"series", v.series.label()},
                          {"n", rc.n},
                          {"records", rs},
                          {"passed", passed},
                          {"failed", failed},
                          {"skipped", skipped},
                          {"pass", failed == 0}}
                         .dump(2)
                  << "\n";
    } else {
        for (auto& r : records) {
            std::cout << (r.skipped ? "SKIP" : r.pass ? "PASS" : "FAIL") << "  " << r.suite << "  " << r.check;
            if (!r.series.empty()) std::cout << "  " << r.series;
            if (!r.skipped) std::cout << "  residual=" << fmt(r.residual);
            if (!r.detail.empty()) std::cout << "  " << r.detail;
            std::cout << "\n";
        }
        std::cout << "verify " << suite << " " << v.series.label() << ": " << passed << " passed, " << failed
                  << " failed, " << skipped << " skipped\n";
    }
    return failed == 0 ? 0 : 1;
}

int cmd_spectrum(const RunConfig& rc) {
    SeriesConfig cfg = series_config(rc);
    Representation R(cfg);
    const auto& B = R.basis();
    json pts = json::array();
    for (int f = 0; f < B.dim(); ++f) {
        auto i = B.index(f);
        std::vector<double> t;
        bool m0 = true;
        for (int j = 1; j <= cfg.n; ++j) {
            t.push_back(R.Qdiag(j)[f]);
            m0 = m0 && t.back() != 0;
        }
        pts.push_back({{"index", i}, {"Q", t}, {"M0", m0}});
    }
    if (rc.format == "json") {
        std::cout << json{{"command", "spectrum"}, {"series", cfg.label()}, {"n", cfg.n}, {"cutoff", cfg.N},
                          {"points", pts}}
                         .dump(2)
                  << "\n";
        return 0;
    }
    std::cout << "series " << cfg.label() << "  n=" << cfg.n << "  cutoff=" << cfg.N << "  points=" << B.dim() << "\n";
    for (auto& p : pts) {
        std::cout << "i=(";
        for (size_t d = 0; d < p["index"].size(); ++d) std::cout << (d ? "," : "") << p["index"][d].get<int>();
        std::cout << ")  Q=(";
        for (size_t d = 0; d < p["Q"].size(); ++d) std::cout << (d ? ", " : "") << fmt(p["Q"][d].get<double>());
        std::cout << ")" << (p["M0"].get<bool>() ? "" : "  zero component") << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum matrix ball toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    RunConfig rc;
    app.add_option("--n", rc.n, "Rank n")->capture_default_str();
    app.add_option("--series", rc.series, "Series m,l,k (default (n,0,0), for n = 1 type (I))");
    app.add_option("--alpha", rc.alpha, "Spectral parameter; the disc parameter a when n = 1")->capture_default_str();
    app.add_option("--vphase", rc.vphase, "Phase of the unitary parameter")->capture_default_str();
    app.add_option("--q", rc.q, "Deformation parameter in (0,1)")->capture_default_str();
    app.add_option("--cutoff", rc.cutoff, "Truncation N")->capture_default_str();
    app.add_option("--margin", rc.margin, "Interior margin")->capture_default_str();
    app.add_option("--tol", rc.tol, "Tolerance")->capture_default_str();
    app.add_option("--seed", rc.seed, "Random seed")->capture_default_str();
    app.add_option("--format", rc.format, "Output format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();

    auto add_expr = [&](CLI::App* sub) {
        auto* pos = sub->add_option("expression", rc.expr, "Expression");
        auto* opt = sub->add_option("--expr", rc.expr, "Expression");
        pos->excludes(opt);
    };
    auto* normalize = app.add_subcommand("normalize", "Print the normal form of an expression");
    add_expr(normalize);
    auto* act = app.add_subcommand("act", "Apply a generator word to an expression");
    add_expr(act);
    std::string gens;
    act->add_option("--gen", gens, "Generator or comma list, e.g. E1 or F1,E1")->required();
    auto* integrate = app.add_subcommand("integrate", "Invariant integral of an expression");
    add_expr(integrate);
    std::string mode = "closed", c_text = "1";
    integrate->add_option("--mode", mode, "closed | trace | jackson | compact")
        ->check(CLI::IsMember({"closed", "trace", "jackson", "compact"}))
        ->capture_default_str();
    integrate->add_option("--c", c_text, "Scale constant")->capture_default_str();
    auto* verify = app.add_subcommand("verify", "Run verification suites");
    std::string suite = "all";
    int samples = 10;
    bool fault = false;
    verify->add_option("--suite", suite, "algebra | action | relations | invariance | fodc | all")
        ->check(CLI::IsMember({"algebra", "action", "relations", "invariance", "fodc", "all"}))
        ->capture_default_str();
    verify->add_option("--samples", samples, "Random elements per check")->capture_default_str();
    verify->add_flag("--inject-fault", fault)->group("");
    auto* spectrum = app.add_subcommand("spectrum", "Joint Q spectrum on the truncated window");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (rc.n < 1) throw usage_error("--n must be at least 1");
        auto need_expr = [&] {
            if (rc.expr.empty()) throw usage_error("an expression is required");
        };
        if (*normalize) return need_expr(), cmd_normalize(rc);
        if (*act) return need_expr(), cmd_act(rc, gens);
        if (*integrate) return need_expr(), cmd_integrate(rc, mode, c_text);
        if (*verify) return cmd_verify(rc, suite, samples, fault);
        if (*spectrum) return cmd_spectrum(rc);
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const unsupported_series& e) {
        std::cerr << "unsupported: " << e.what() << "\n";
        return 2;
    } catch (const context_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
