#pragma once

// JSON (nlohmann) encodings of module specs, shtuka files and reports. Field elements are stored as
// integer codes next to a human-readable "text" field; decoding reads the codes.

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "drinfeld.hpp"
#include "parse.hpp"
#include "shtuka.hpp"
#include "special_values.hpp"
#include "taelman.hpp"

namespace goss {

using json = nlohmann::json;

/// F_q from its order and an optional modulus over F_p given as text in g (or x), e.g. "g^2+g+1".
inline const GF& field_from(uint32_t q, const std::string& modulus = "") {
    if (modulus.empty()) return GF::with_order(q);
    uint32_t p = 0;
    for (uint32_t c = 2; c <= q; ++c)
        if (q % c == 0) {
            p = c;
            break;
        }
    if (p == 0) throw input_error("invalid field order " + std::to_string(q));
    const GF& Fp = GF::prime(p);
    std::string m = modulus;
    for (auto& ch : m)
        if (ch == 'g') ch = 'x';
    FqPoly mp = parse_poly(Fp, m, "x");
    std::vector<uint32_t> codes;
    for (int i = 0; i <= mp.degree(); ++i) codes.push_back(mp[i].code());
    const GF& F = GF::get(p, codes);
    if (F.q() != q) throw input_error("modulus degree does not match q = " + std::to_string(q));
    if (!is_irreducible(mp)) throw input_error("field modulus " + modulus + " is not irreducible");
    return F;
}

inline json poly_to_json(const FqPoly& f) {
    json c = json::array();
    for (int i = 0; i <= f.degree(); ++i) c.push_back(f[i].code());
    return {{"var", f.var()}, {"coeffs", c}, {"text", f.str()}};
}

inline FqPoly poly_from_json(const GF& F, const json& j) {
    std::vector<Fq> c;
    for (auto& x : j.at("coeffs")) c.emplace_back(F, x.get<uint32_t>());
    return FqPoly(std::move(c), Fq(F, 0), j.value("var", "t"));
}

inline json laurent_to_json(const Laurent& x) {
    json c = json::array();
    for (auto& a : x.coeffs()) c.push_back(a.code());
    return {{"var", x.var()}, {"valuation", x.valuation()}, {"precision", x.precision()}, {"coeffs", c}, {"text", x.str()}};
}

inline Laurent laurent_from_json(const GF& F, const json& j) {
    std::vector<Fq> c;
    for (auto& x : j.at("coeffs")) c.emplace_back(F, x.get<uint32_t>());
    return Laurent(F, j.at("valuation").get<long>(), j.at("precision").get<long>(), std::move(c), j.value("var", "t"));
}

inline json lam_to_json(const Lam& x, const ArtinRing& L) {
    json c = json::array();
    for (auto& a : L.coeffs(x)) c.push_back(a.code());
    return {{"coeffs", c}, {"text", x.str()}};
}

inline Lam lam_from_json(const ArtinRing& L, const json& j) {
    std::vector<Fq> c;
    for (auto& x : j.at("coeffs")) c.emplace_back(*L.F, x.get<uint32_t>());
    return L.from_coeffs(c);
}

inline json fq_matrix_to_json(const Matrix<Fq>& m) {
    json rows = json::array();
    for (size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c).code());
        rows.push_back(row);
    }
    return rows;
}

inline Matrix<Fq> fq_matrix_from_json(const GF& F, const json& j) {
    Matrix<Fq> m(j.size(), j.empty() ? 0 : j[0].size(), Fq(F, 0));
    for (size_t r = 0; r < m.rows(); ++r)
        for (size_t c = 0; c < m.cols(); ++c) m(r, c) = Fq(F, j[r][c].get<uint32_t>());
    return m;
}

// ---------------------------------------------------------------------------
// Module specs: {"q": 2, "modulus": "g^2+g+1", "coeffs": ["1", "1"], "rank": 2}

inline DrinfeldModule module_from_json(const json& j) {
    uint32_t q = j.at("q").get<uint32_t>();
    const GF& F = field_from(q, j.value("modulus", ""));
    std::vector<FqPoly> coeffs;
    for (auto& c : j.at("coeffs")) coeffs.push_back(parse_poly(F, c.is_string() ? c.get<std::string>() : c.dump(), "θ"));
    if (j.contains("rank") && j.at("rank").get<size_t>() != coeffs.size())
        throw input_error("rank does not match the number of coefficients");
    return make_drinfeld(F, coeffs);
}

inline json module_to_json(const DrinfeldModule& E) {
    json c = json::array();
    for (auto& a : E.a) c.push_back(a.str());
    json out = {{"q", E.F->q()}, {"rank", E.rank}, {"coeffs", c}, {"phi_t", E.str()}};
    if (E.F->e() > 1) out["modulus"] = E.F->modulus_string();
    return out;
}

// ---------------------------------------------------------------------------
// Reports.

inline json to_json(const LocalFactor& lf) {
    json c = json::array();
    for (int i = 0; i <= lf.c.degree(); ++i) c.push_back(poly_to_json(lf.c[i]));
    json out = {{"prime", poly_to_json(lf.f)},
                {"degree", lf.d},
                {"charpoly", lf.c.str()},
                {"charpoly_coeffs", c},
                {"P", lf.p_poly_str()},
                {"P_at_1", {{"num", poly_to_json(lf.c_at_one)}, {"den", poly_to_json(lf.c_at_zero)}}}};
    if (!lf.norm_matrix.empty()) out["norm_matrix"] = lf.norm_matrix;
    return out;
}

inline LocalFactor local_factor_from_json(const GF& F, const json& j) {
    LocalFactor lf;
    lf.f = poly_from_json(F, j.at("prime"));
    lf.d = j.at("degree").get<int>();
    std::vector<FqPoly> c;
    for (auto& x : j.at("charpoly_coeffs")) c.push_back(poly_from_json(F, x));
    FqPoly zero(Fq(F, 0), "t");
    lf.c = Poly<FqPoly>(std::move(c), zero, "X");
    lf.c_at_one = poly_from_json(F, j.at("P_at_1").at("num"));
    lf.c_at_zero = poly_from_json(F, j.at("P_at_1").at("den"));
    lf.norm_matrix = j.value("norm_matrix", "");
    return lf;
}

inline json to_json(const LValueReport& r) {
    json worst = json::array();
    for (size_t d = 1; d < r.worst_tail_valuation.size(); ++d) {
        long v = r.worst_tail_valuation[d];
        worst.push_back(v == std::numeric_limits<long>::max() ? json(nullptr) : json(v));
    }
    return {{"value", laurent_to_json(r.value)},  {"prec_requested", r.prec_requested},
            {"prec_achieved", r.prec_achieved},   {"cutoff_degree", r.cutoff_degree},
            {"primes", r.primes},                 {"factors_checked", r.factors_checked},
            {"worst_tail_valuation", worst},      {"seconds", r.seconds}};
}

inline LValueReport lvalue_from_json(const GF& F, const json& j) {
    LValueReport r;
    r.value = laurent_from_json(F, j.at("value"));
    r.prec_requested = j.value("prec_requested", r.value.precision());
    r.prec_achieved = j.at("prec_achieved").get<long>();
    r.cutoff_degree = j.at("cutoff_degree").get<int>();
    r.primes = j.at("primes").get<size_t>();
    r.factors_checked = j.at("factors_checked").get<size_t>();
    r.worst_tail_valuation.assign(1, std::numeric_limits<long>::max());
    if (j.contains("worst_tail_valuation"))
        for (auto& v : j.at("worst_tail_valuation"))
            r.worst_tail_valuation.push_back(v.is_null() ? std::numeric_limits<long>::max() : v.get<long>());
    r.seconds = j.value("seconds", 0.0);
    return r;
}

inline json to_json(const CarlitzCheck& c) {
    json out = {{"euler", laurent_to_json(c.euler)},
                {"smooth", laurent_to_json(c.smooth)},
                {"log_series", laurent_to_json(c.log_series)},
                {"cutoff_degree", c.cutoff},
                {"primes", c.primes},
                {"verdict", c.pass() ? "PASS" : "FAIL"}};
    if (c.disagreement) out["first_disagreement"] = {{"exponent", *c.disagreement}, {"between", c.which}};
    return out;
}

inline CarlitzCheck carlitz_check_from_json(const GF& F, const json& j) {
    CarlitzCheck c;
    c.euler = laurent_from_json(F, j.at("euler"));
    c.smooth = laurent_from_json(F, j.at("smooth"));
    c.log_series = laurent_from_json(F, j.at("log_series"));
    c.cutoff = j.at("cutoff_degree").get<int>();
    c.primes = j.at("primes").get<size_t>();
    if (j.contains("first_disagreement")) {
        c.disagreement = j.at("first_disagreement").at("exponent").get<long>();
        c.which = j.at("first_disagreement").at("between").get<std::string>();
    }
    return c;
}

inline json to_json(const ClassUnitReport& r) {
    return {{"class_dim", r.class_dim},
            {"t_action", fq_matrix_to_json(r.t_action)},
            {"fitting", r.g.str()},
            {"fitting_coeffs", poly_to_json(r.g)},
            {"unit", laurent_to_json(r.u)},
            {"unit_degree", r.unit_degree},
            {"kernel_dim", r.kernel_dim},
            {"window", {{"c", r.c}, {"B", r.B}, {"N", r.N}}}};
}

inline ClassUnitReport class_unit_from_json(const GF& F, const json& j) {
    ClassUnitReport r;
    r.class_dim = j.at("class_dim").get<size_t>();
    r.t_action = fq_matrix_from_json(F, j.at("t_action"));
    r.g = poly_from_json(F, j.at("fitting_coeffs"));
    r.u = laurent_from_json(F, j.at("unit"));
    r.unit_degree = j.at("unit_degree").get<long>();
    r.kernel_dim = j.at("kernel_dim").get<size_t>();
    r.c = j.at("window").at("c").get<long>();
    r.B = j.at("window").at("B").get<long>();
    r.N = j.at("window").at("N").get<long>();
    return r;
}

inline json to_json(const CnfReport& r) {
    json out = {{"verdict", r.pass ? "PASS" : "FAIL"},
                {"lhs", laurent_to_json(r.lhs)},
                {"rhs", laurent_to_json(r.rhs)},
                {"residual", laurent_to_json(r.residual)},
                {"prec", r.prec},
                {"taelman", to_json(r.taelman)},
                {"lvalue", to_json(r.lvalue)}};
    out["alpha"] = r.alpha ? json(r.alpha->code()) : json("FAIL");
    return out;
}

inline CnfReport cnf_from_json(const GF& F, const json& j) {
    CnfReport r;
    r.pass = j.at("verdict") == "PASS";
    if (j.at("alpha").is_number()) r.alpha = Fq(F, j.at("alpha").get<uint32_t>());
    r.lhs = laurent_from_json(F, j.at("lhs"));
    r.rhs = laurent_from_json(F, j.at("rhs"));
    r.residual = laurent_from_json(F, j.at("residual"));
    r.prec = j.at("prec").get<long>();
    r.taelman = class_unit_from_json(F, j.at("taelman"));
    r.lvalue = lvalue_from_json(F, j.at("lvalue"));
    return r;
}

inline json local_l_table(const std::vector<LocalL>& fs, const ArtinRing& L) {
    json t = json::array();
    for (auto& f : fs)
        t.push_back({{"prime", poly_to_json(f.f)}, {"local", lam_to_json(f.value, L)}, {"collapse", lam_to_json(f.collapse, L)}});
    return t;
}

inline std::vector<LocalL> local_l_table_from_json(const ArtinRing& L, const json& j) {
    std::vector<LocalL> fs;
    for (auto& x : j)
        fs.push_back({poly_from_json(*L.F, x.at("prime")), lam_from_json(L, x.at("local")), lam_from_json(L, x.at("collapse"))});
    return fs;
}

inline json to_json(const TraceReport& r, const ArtinRing& L) {
    return {{"lhs", lam_to_json(r.lhs, L)},
            {"rhs", lam_to_json(r.rhs, L)},
            {"factors", local_l_table(r.factors, L)},
            {"verdict", r.pass ? "PASS" : "FAIL"}};
}

inline TraceReport trace_from_json(const ArtinRing& L, const json& j) {
    TraceReport r;
    r.lhs = lam_from_json(L, j.at("lhs"));
    r.rhs = lam_from_json(L, j.at("rhs"));
    r.factors = local_l_table_from_json(L, j.at("factors"));
    r.pass = j.at("verdict") == "PASS";
    return r;
}

inline json to_json(const ArtTraceReport& r, const ArtinRing& L) {
    json rho = json::array();
    for (size_t a = 0; a < r.rho.rows(); ++a) {
        json row = json::array();
        for (size_t b = 0; b < r.rho.cols(); ++b) row.push_back(lam_to_json(r.rho(a, b), L));
        rho.push_back(row);
    }
    return {{"zeta", lam_to_json(r.zeta, L)},
            {"L", lam_to_json(r.L, L)},
            {"det_rho", lam_to_json(r.det_rho, L)},
            {"det_rho_line", lam_to_json(r.det_rho_line, L)},
            {"rhs", lam_to_json(r.rhs, L)},
            {"rhs_matrix_det", lam_to_json(r.rhs_matrix, L)},
            {"rho", rho},
            {"kernel_rank", r.kernel_rank},
            {"complement_invariant", r.complement_invariant},
            {"factors", local_l_table(r.factors, L)},
            {"verdict", r.pass ? "PASS" : "FAIL"},
            {"matrix_det_reading", r.pass_matrix_det ? "PASS" : "FAIL"}};
}

inline ArtTraceReport arttrace_from_json(const ArtinRing& L, const json& j) {
    ArtTraceReport r;
    r.zeta = lam_from_json(L, j.at("zeta"));
    r.L = lam_from_json(L, j.at("L"));
    r.det_rho = lam_from_json(L, j.at("det_rho"));
    r.det_rho_line = lam_from_json(L, j.at("det_rho_line"));
    r.rhs = lam_from_json(L, j.at("rhs"));
    r.rhs_matrix = lam_from_json(L, j.at("rhs_matrix_det"));
    const json& rho = j.at("rho");
    r.rho = Matrix<Lam>(rho.size(), rho.empty() ? 0 : rho[0].size(), L.zero());
    for (size_t a = 0; a < r.rho.rows(); ++a)
        for (size_t b = 0; b < r.rho.cols(); ++b) r.rho(a, b) = lam_from_json(L, rho[a][b]);
    r.kernel_rank = j.at("kernel_rank").get<size_t>();
    r.complement_invariant = j.at("complement_invariant").get<bool>();
    r.factors = local_l_table_from_json(L, j.at("factors"));
    r.pass = j.at("verdict") == "PASS";
    r.pass_matrix_det = j.at("matrix_det_reading") == "PASS";
    return r;
}

// ---------------------------------------------------------------------------
// Shtuka files:
// {"lambda":{"p":2,"e_nilpotent":"z^2"},"twists":[-2],"i":[["1"]],"j":[["z*x0*x1"]],"witness":{"ideal":"z","order":2}}
// Optional "twists1" gives the twists of M1 (default: "twists").

inline HPoly hpoly_from_text(const ArtinRing& L, const std::string& text, int deg) {
    SparsePoly s = parse_sparse(*L.F, text);
    HPoly p = HPoly::zero(L, deg);
    for (auto& [m, c] : s.terms) {
        int a = 0, b = 0, k = 0;
        for (auto& [v, ex] : m) {
            if (v == "x0")
                a = ex;
            else if (v == "x1")
                b = ex;
            else if (v == "z")
                k = ex;
            else
                throw input_error("unknown variable '" + v + "' in shtuka entry '" + text + "'");
        }
        if (k >= L.e) continue;
        if (a + b != deg)
            throw input_error("entry '" + text + "' is not homogeneous of degree " + std::to_string(deg));
        p.c[a] += L.z_power(k) * L.scalar(c);
    }
    return p;
}

inline int parse_nilpotent_order(const GF& F, const std::string& text) {
    SparsePoly s = parse_sparse(F, text);
    if (s.terms.size() != 1) throw input_error("e_nilpotent must be a monomial z^e");
    auto& [m, c] = *s.terms.begin();
    if (c != Fq(F, 1) || m.size() != 1 || m.begin()->first != "z") throw input_error("e_nilpotent must be a monomial z^e");
    return m.begin()->second;
}

inline POneShtuka shtuka_from_json(const json& j) {
    const json& lj = j.at("lambda");
    uint32_t q = lj.contains("q") ? lj.at("q").get<uint32_t>() : lj.at("p").get<uint32_t>();
    const GF& F = field_from(q, lj.value("modulus", ""));
    POneShtuka P;
    P.L = ArtinRing::make(F, parse_nilpotent_order(F, lj.value("e_nilpotent", "z")));
    P.tw0 = j.at("twists").get<std::vector<int>>();
    P.tw1 = j.contains("twists1") ? j.at("twists1").get<std::vector<int>>() : P.tw0;
    auto read = [&](const char* key, bool frob) {
        const json& m = j.at(key);
        if (m.size() != P.tw1.size()) throw input_error(std::string(key) + " needs one row per summand of M1");
        std::vector<std::vector<HPoly>> out;
        for (size_t r = 0; r < m.size(); ++r) {
            if (m[r].size() != P.tw0.size()) throw input_error(std::string(key) + " needs one column per summand of M0");
            out.emplace_back();
            for (size_t c = 0; c < m[r].size(); ++c) {
                int deg = P.tw1[r] - (frob ? static_cast<int>(F.q()) : 1) * P.tw0[c];
                std::string t = m[r][c].is_string() ? m[r][c].get<std::string>() : m[r][c].dump();
                out.back().push_back(hpoly_from_text(P.L, t, deg));
            }
        }
        return out;
    };
    P.i = read("i", false);
    P.j = read("j", true);
    if (j.contains("witness")) {
        const json& w = j.at("witness");
        int k = parse_nilpotent_order(F, w.at("ideal").get<std::string>());
        P.witness = Witness{k, w.at("order").get<int>()};
    }
    P.validate();
    return P;
}

inline json shtuka_to_json(const POneShtuka& P) {
    auto mat = [](const std::vector<std::vector<HPoly>>& m) {
        json rows = json::array();
        for (auto& row : m) {
            json r = json::array();
            for (auto& x : row) r.push_back(x.str());
            rows.push_back(r);
        }
        return rows;
    };
    json lj = {{"q", P.L.F->q()}, {"e_nilpotent", "z^" + std::to_string(P.L.e)}};
    if (P.L.F->e() > 1) lj["modulus"] = P.L.F->modulus_string();
    json out = {{"lambda", lj}, {"twists", P.tw0}, {"i", mat(P.i)}, {"j", mat(P.j)}};
    if (P.tw1 != P.tw0) out["twists1"] = P.tw1;
    if (P.witness) out["witness"] = {{"ideal", "z^" + std::to_string(P.witness->ideal_valuation)}, {"order", P.witness->order}};
    return out;
}

}  // namespace goss
