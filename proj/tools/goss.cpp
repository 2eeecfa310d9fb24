// goss: command-line front end. Exit codes: 0 ok, 1 FAIL verdict or failed certificate, 2 infeasible,
// 3 input or hypothesis error.

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "goss/goss.hpp"

using namespace goss;

namespace {

struct Config {
    uint32_t q = 2;
    std::string modulus;
    int rank = 0;
    std::string coeffs;
    std::string spec;
    long prec = 10;
    int threads = 1;
    std::string format = "text";
    uint64_t seed = 12345;
    int dmax = 3;
    std::string prime;
    int cutoff = -1;
    long c = -1, B = -1;
    int random = 0;
    std::string kind = "auto";
};

json load_json(const std::string& spec) {
    std::string s = spec;
    auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || s[first] != '{') {
        std::ifstream in(spec);
        if (!in) throw input_error("cannot open spec file " + spec);
        std::stringstream buf;
        buf << in.rdbuf();
        s = buf.str();
    }
    try {
        return json::parse(s);
    } catch (const json::exception& e) {
        throw input_error(std::string("malformed JSON: ") + e.what());
    }
}

std::vector<std::string> split_coeffs(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(item);
    return out;
}

DrinfeldModule module_of(const Config& cfg) {
    if (!cfg.spec.empty()) return module_from_json(load_json(cfg.spec));
    json j = {{"q", cfg.q}};
    if (!cfg.modulus.empty()) j["modulus"] = cfg.modulus;
    auto cs = cfg.coeffs.empty() ? std::vector<std::string>{"1"} : split_coeffs(cfg.coeffs);
    j["coeffs"] = cs;
    if (cfg.rank > 0) j["rank"] = cfg.rank;
    return module_from_json(j);
}

const GF& field_of(const Config& cfg) { return field_from(cfg.q, cfg.modulus); }

// Any single variable name (t, θ, theta) is accepted.
FqPoly prime_of(const GF& F, const std::string& text) { return parse_poly(F, text, "θ"); }

void emit(const Config& cfg, const json& j, const std::string& text) {
    if (cfg.format == "json")
        std::cout << j.dump(2) << "\n";
    else
        std::cout << text;
}

std::string seconds_line(double s) {
    std::ostringstream o;
    o.setf(std::ios::fixed);
    o.precision(3);
    o << "time: " << s << " s\n";
    return o.str();
}

int cmd_irreducibles(const Config& cfg) {
    const GF& F = field_of(cfg);
    auto ps = monic_irreducibles(F, cfg.dmax, "t");
    json arr = json::array();
    std::ostringstream t;
    t << "monic irreducibles over " << F.name() << " of degree <= " << cfg.dmax << ": " << ps.size() << "\n";
    for (auto& p : ps) {
        arr.push_back(p.str());
        t << p.str() << "\n";
    }
    emit(cfg, {{"field", F.name()}, {"d_max", cfg.dmax}, {"count", ps.size()}, {"polynomials", arr}}, t.str());
    return 0;
}

int cmd_lfactor(const Config& cfg) {
    if (cfg.prime.empty()) throw input_error("lfactor needs --prime");
    auto E = module_of(cfg);
    FqPoly f = prime_of(*E.F, cfg.prime);
    LocalFactor lf = local_lfactor(E, f, FactorPath::Auto, true);
    json j = to_json(lf);
    j["module"] = module_to_json(E);
    j["P_at_1_series"] = laurent_to_json(lf.p_value(cfg.prec));
    std::ostringstream t;
    t << "module: " << E.str() << "\nprime: " << f.str() << " (degree " << lf.d << ")\n"
      << "c(X) = " << lf.c.str() << "\nP(T) = " << lf.p_poly_str() << "\n"
      << "P(1) = " << lf.p_value(cfg.prec).str() << "\n";
    emit(cfg, j, t.str());
    return 0;
}

int cmd_lvalue(const Config& cfg) {
    auto E = module_of(cfg);
    std::optional<int> cut;
    if (cfg.cutoff >= 0) cut = cfg.cutoff;
    auto r = l_value(E, cfg.prec, cfg.threads, cut);
    std::ostringstream t;
    t << "module: " << E.str() << "\nL(E*,0) = " << r.value.str() << "\n"
      << "precision achieved: " << r.prec_achieved << " (requested " << r.prec_requested << ")\n"
      << "cutoff degree: " << r.cutoff_degree << ", primes: " << r.primes << ", factors checked: " << r.factors_checked << "\n"
      << seconds_line(r.seconds);
    emit(cfg, to_json(r), t.str());
    return 0;
}

int cmd_carlitz_check(const Config& cfg) {
    const GF& F = field_of(cfg);
    auto t0 = std::chrono::steady_clock::now();
    auto c = carlitz_check(F, cfg.prec, cfg.threads);
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json j = to_json(c);
    j["seconds"] = s;
    std::ostringstream t;
    t << "euler product : " << c.euler.str() << "\nsmooth sum    : " << c.smooth.str() << "\nlog series    : "
      << c.log_series.str() << "\ncutoff degree " << c.cutoff << ", " << c.primes << " primes\n";
    if (c.disagreement) t << "first disagreement at t^" << *c.disagreement << " (" << c.which << ")\n";
    t << (c.pass() ? "PASS" : "FAIL") << "\n" << seconds_line(s);
    emit(cfg, j, t.str());
    return c.pass() ? 0 : 1;
}

TaelmanOptions taelman_options(const Config& cfg) {
    TaelmanOptions o;
    if (cfg.c >= 0) o.c = cfg.c;
    if (cfg.B >= 0) o.B = cfg.B;
    return o;
}

int cmd_units(const Config& cfg) {
    auto E = module_of(cfg);
    auto t0 = std::chrono::steady_clock::now();
    auto r = taelman_data(E, cfg.prec, taelman_options(cfg));
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json j = to_json(r);
    j["seconds"] = s;
    std::ostringstream t;
    t << "module: " << E.str() << "\nclass module dimension: " << r.class_dim << "\nFitting generator: " << r.g.str()
      << "\nunit generator: " << r.u.str() << "\nwindow: c=" << r.c << " B=" << r.B << " N=" << r.N << "\n"
      << seconds_line(s);
    emit(cfg, j, t.str());
    return 0;
}

int cmd_verify_cnf(const Config& cfg) {
    auto E = module_of(cfg);
    auto t0 = std::chrono::steady_clock::now();
    auto r = verify_cnf(E, cfg.prec, cfg.threads, taelman_options(cfg));
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json j = to_json(r);
    j["seconds"] = s;
    std::ostringstream t;
    t << "module: " << E.str() << "\ng(θ)·u     = " << r.lhs.str() << "\nL(E*,0)    = " << r.rhs.str()
      << "\nclass dim " << r.taelman.class_dim << ", Fitting generator " << r.taelman.g.str() << "\n"
      << "alpha = " << (r.alpha ? r.alpha->str() : std::string("FAIL")) << "\n"
      << (r.pass ? "PASS" : "FAIL") << "\n" << seconds_line(s);
    emit(cfg, j, t.str());
    return r.pass ? 0 : 1;
}

bool is_nilpotent_kind(const POneShtuka& P) {
    if (P.tw0 != P.tw1) return false;
    for (size_t r = 0; r < P.n1(); ++r)
        for (size_t c = 0; c < P.n0(); ++c) {
            const HPoly& x = P.i[r][c];
            if (r == c ? !(x.deg == 0 && x.c[0] == P.L.one()) : !x.is_zero()) return false;
        }
    return true;
}

json run_trace(const POneShtuka& P, const std::string& kind, bool& pass, std::string& line) {
    bool nil = kind == "nil" || (kind == "auto" && is_nilpotent_kind(P));
    json j = {{"shtuka", shtuka_to_json(P)}, {"kind", nil ? "nil" : "art"}};
    if (nil) {
        auto r = check_nilptrace(P);
        j["report"] = to_json(r, P.L);
        pass = r.pass;
        line = "det(1 - j | H1) = " + r.lhs.str() + "   L = " + r.rhs.str();
    } else {
        auto r = check_arttrace(P);
        j["report"] = to_json(r, P.L);
        pass = r.pass && r.complement_invariant;
        line = "zeta = " + r.zeta.str() + "   L = " + r.L.str() + "   det(rho)^-1 = " + r.det_rho_line.str() +
               (r.complement_invariant ? "" : "   complement dependence");
    }
    return j;
}

int cmd_trace_check(const Config& cfg) {
    if (cfg.kind != "auto" && cfg.kind != "nil" && cfg.kind != "art") throw input_error("--kind must be auto, nil or art");
    auto t0 = std::chrono::steady_clock::now();
    std::vector<POneShtuka> cases;
    if (!cfg.spec.empty()) {
        cases.push_back(shtuka_from_json(load_json(cfg.spec)));
    } else if (cfg.random > 0) {
        if (cfg.kind == "auto") throw input_error("--random needs --kind nil or art");
        std::mt19937_64 rng(cfg.seed);
        for (int k = 0; k < cfg.random; ++k)
            cases.push_back(cfg.kind == "nil" ? random_nilptrace_instance(rng) : random_arttrace_instance(rng));
    } else {
        throw input_error("trace-check needs --spec or --random");
    }
    json arr = json::array();
    std::ostringstream t;
    size_t passed = 0;
    for (size_t k = 0; k < cases.size(); ++k) {
        bool pass = false;
        std::string line;
        arr.push_back(run_trace(cases[k], cfg.kind, pass, line));
        passed += pass;
        t << "[" << k << "] " << (pass ? "PASS" : "FAIL") << "  " << line << "\n";
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = passed == cases.size();
    t << passed << "/" << cases.size() << " " << (ok ? "PASS" : "FAIL") << "\n" << seconds_line(s);
    json j = {{"cases", arr}, {"passed", passed}, {"total", cases.size()}, {"verdict", ok ? "PASS" : "FAIL"}, {"seconds", s}};
    if (cfg.random > 0) j["seed"] = cfg.seed;
    emit(cfg, j, t.str());
    return ok ? 0 : 1;
}

void add_module_flags(CLI::App* sub, Config& cfg) {
    sub->add_option("--q", cfg.q, "field order");
    sub->add_option("--modulus", cfg.modulus, "modulus of F_q over F_p in g, e.g. g^2+g+1");
    sub->add_option("--rank", cfg.rank, "rank (checked against --coeffs)");
    sub->add_option("--coeffs", cfg.coeffs, "comma-separated a_1,...,a_r in theta");
    sub->add_option("--spec", cfg.spec, "module spec JSON file or inline JSON");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Goss L-values, Taelman units and shtuka trace formulas"};
    app.require_subcommand(1);
    Config cfg;
    app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"text", "json"}));

    auto* irr = app.add_subcommand("irreducibles", "list monic irreducibles over F_q");
    irr->add_option("--q", cfg.q, "field order");
    irr->add_option("--modulus", cfg.modulus, "modulus of F_q over F_p");
    irr->add_option("--dmax", cfg.dmax, "maximal degree");

    auto* lf = app.add_subcommand("lfactor", "local L-factor at a prime");
    add_module_flags(lf, cfg);
    lf->add_option("--prime", cfg.prime, "monic irreducible in theta (or t)")->required();
    lf->add_option("--prec", cfg.prec, "precision of P(1)");

    auto* lv = app.add_subcommand("lvalue", "L(E*,0) by Euler product");
    add_module_flags(lv, cfg);
    lv->add_option("--prec", cfg.prec, "precision");
    lv->add_option("--threads", cfg.threads, "worker threads");
    lv->add_option("--cutoff", cfg.cutoff, "override the prime cutoff degree");

    auto* cc = app.add_subcommand("carlitz-check", "Euler product vs smooth sum vs log(1) for Carlitz");
    cc->add_option("--q", cfg.q, "field order");
    cc->add_option("--modulus", cfg.modulus, "modulus of F_q over F_p");
    cc->add_option("--prec", cfg.prec, "precision");
    cc->add_option("--threads", cfg.threads, "worker threads");

    auto* un = app.add_subcommand("units", "class module and unit generator");
    add_module_flags(un, cfg);
    un->add_option("--prec", cfg.prec, "precision N");
    un->add_option("--c", cfg.c, "window size override");
    un->add_option("--B", cfg.B, "box bound override");

    auto* vc = app.add_subcommand("verify-cnf", "class number formula check");
    add_module_flags(vc, cfg);
    vc->add_option("--prec", cfg.prec, "precision");
    vc->add_option("--threads", cfg.threads, "worker threads");
    vc->add_option("--c", cfg.c, "window size override");
    vc->add_option("--B", cfg.B, "box bound override");

    auto* tc = app.add_subcommand("trace-check", "trace formulas for shtukas on the projective line");
    tc->add_option("--spec", cfg.spec, "shtuka JSON file or inline JSON");
    tc->add_option("--random", cfg.random, "number of seeded random instances");
    tc->add_option("--kind", cfg.kind, "auto | nil | art");
    tc->add_option("--seed", cfg.seed, "seed for --random (default 12345)");

    for (auto* s : {irr, lf, lv, cc, un, vc, tc})
        s->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"text", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 3;
    }
    if (cfg.threads < 1) {
        std::cerr << "error: --threads must be at least 1\n";
        return 3;
    }

    try {
        if (*irr) return cmd_irreducibles(cfg);
        if (*lf) return cmd_lfactor(cfg);
        if (*lv) return cmd_lvalue(cfg);
        if (*cc) return cmd_carlitz_check(cfg);
        if (*un) return cmd_units(cfg);
        if (*vc) return cmd_verify_cnf(cfg);
        if (*tc) return cmd_trace_check(cfg);
    } catch (const input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    } catch (const hypothesis_error& e) {
        std::cerr << "hypothesis error: " << e.what() << "\n";
        return 3;
    } catch (const infeasible_error& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 2;
    } catch (const certificate_error& e) {
        std::cerr << "certificate failure: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
