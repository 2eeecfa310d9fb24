#pragma once

// Drinfeld F_q[t]-modules over R = F_q[θ] with ι(t) = θ: φ_t = θ + a_1 τ + … + a_r τ^r.
// Motive matrices, per-prime Frobenius norms and local L-factors, and a brute-force
// torsion oracle for the Frobenius characteristic polynomial.

#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "irreducible.hpp"
#include "laurent.hpp"
#include "matrix.hpp"
#include "quotient.hpp"
#include "skew.hpp"

namespace goss {

struct DrinfeldModule {
    const GF* F = nullptr;
    int rank = 0;
    std::vector<FqPoly> a;  // a_1..a_r, polynomials in θ

    const GF& field() const { return *F; }
    uint32_t q() const { return F->q(); }
    /// Largest θ-degree among the a_j.
    int max_coeff_degree() const {
        int m = 0;
        for (auto& x : a) m = std::max(m, x.degree());
        return m;
    }
    std::string str() const {
        std::string s = "θ";
        for (int j = 1; j <= rank; ++j) {
            const FqPoly& c = a[j - 1];
            if (c.is_zero()) continue;
            std::string cs = c.str();
            s += " + ";
            if (!c.is_one()) s += (cs.find(' ') != std::string::npos ? "(" + cs + ")" : cs) + "*";
            s += j == 1 ? "τ" : "τ^" + std::to_string(j);
        }
        return s;
    }
};

inline FqPoly theta_poly(const GF& F) { return FqPoly::gen(Fq(F, 1), "θ"); }

/// Validated module; a_r must be a nonzero constant (everywhere good reduction).
inline DrinfeldModule make_drinfeld(const GF& F, std::vector<FqPoly> coeffs) {
    if (coeffs.empty()) throw input_error("rank must be at least 1");
    for (auto& c : coeffs) {
        if (c.coeff_zero().field_ptr() != &F) throw input_error("coefficient over a different field");
        c = c.with_var("θ");
    }
    const FqPoly& top = coeffs.back();
    if (top.degree() != 0)
        throw hypothesis_error("leading coefficient a_r = " + top.str() + " is not a unit of F_q[θ] (good reduction fails)");
    DrinfeldModule E;
    E.F = &F;
    E.rank = static_cast<int>(coeffs.size());
    E.a = std::move(coeffs);
    return E;
}

inline DrinfeldModule carlitz(const GF& F) { return make_drinfeld(F, {FqPoly::constant(Fq(F, 1), "θ")}); }

inline Twist<FqPoly> r_frobenius() {
    return [](const FqPoly& x) { return qpower(x); };
}

inline TauPoly<FqPoly> phi_t(const DrinfeldModule& E) {
    std::vector<FqPoly> c{theta_poly(*E.F)};
    for (auto& x : E.a) c.push_back(x);
    return TauPoly<FqPoly>(std::move(c), FqPoly(Fq(*E.F, 0), "θ"), r_frobenius());
}

/// φ_a for a ∈ F_q[t], by Horner in φ_t.
inline TauPoly<FqPoly> phi(const DrinfeldModule& E, const FqPoly& a) {
    TauPoly<FqPoly> pt = phi_t(E);
    FqPoly zero(Fq(*E.F, 0), "θ");
    TauPoly<FqPoly> acc({}, zero, r_frobenius());
    for (int i = a.degree(); i >= 0; --i) acc = acc * pt + TauPoly<FqPoly>::constant(FqPoly::constant(a[i], "θ"), r_frobenius());
    return acc;
}

/// Matrix of τ on the motive basis 1, τ, …, τ^{r-1} over K[t] where K receives θ.
/// Column i < r-1 is e_{i+1}; the last column is a_r^{-1}((t - θ), -a_1, …, -a_{r-1}).
template <class K, class Eval>
Matrix<Poly<K>> motive_matrix(const DrinfeldModule& E, const K& theta, Eval&& eval_theta_poly) {
    int r = E.rank;
    K one = theta.one(), zero = theta.zero();
    Poly<K> pzero(zero, "t");
    Matrix<Poly<K>> C(r, r, pzero);
    for (int i = 0; i + 1 < r; ++i) C(i + 1, i) = Poly<K>::constant(one, "t");
    K arinv = eval_theta_poly(E.a[r - 1]).inv();
    C(0, r - 1) = Poly<K>(std::vector<K>{-(theta * arinv), arinv}, zero, "t");
    for (int j = 1; j < r; ++j) C(j, r - 1) = Poly<K>::constant(-(eval_theta_poly(E.a[j - 1]) * arinv), "t");
    return C;
}

/// Generic motive matrix over A ⊗ R = F_q[θ][t].
inline Matrix<Poly<FqPoly>> motive_tau_matrix(const DrinfeldModule& E) {
    // a_r^{-1} exists in F_q[θ] because a_r is a constant
    int r = E.rank;
    FqPoly zero(Fq(*E.F, 0), "θ"), one = zero.one();
    Poly<FqPoly> pzero(zero, "t");
    Matrix<Poly<FqPoly>> C(r, r, pzero);
    for (int i = 0; i + 1 < r; ++i) C(i + 1, i) = Poly<FqPoly>::constant(one, "t");
    Fq arinv = E.a[r - 1][0].inv();
    FqPoly th = theta_poly(*E.F);
    C(0, r - 1) = Poly<FqPoly>(std::vector<FqPoly>{-(th * arinv), FqPoly::constant(arinv, "θ")}, zero, "t");
    for (int j = 1; j < r; ++j) C(j, r - 1) = Poly<FqPoly>::constant(-(E.a[j - 1] * arinv), "t");
    return C;
}

/// Residue-field carrier for k = F_q[θ]/(f): how to embed, twist and read back F_q-values.
template <class K>
struct ResidueField {
    K theta;
    std::function<K(const Fq&)> embed;
    std::function<K(const K&)> frob;             // x ↦ x^q
    std::function<std::optional<Fq>(const K&)> to_fq;  // value if in F_q ⊂ k
    K eval(const FqPoly& p) const { return p.eval_with(theta, embed); }
};

inline ResidueField<FqQuot> residue_field_generic(const FqPoly& f) {
    auto ctx = fq_residue_ring(f.with_var("θ"), true);
    ResidueField<FqQuot> k;
    FqQuot base = embed(ctx, f.coeff_zero());
    k.theta = base.gen();
    k.embed = [ctx](const Fq& c) { return embed(ctx, c); };
    uint32_t q = f.coeff_zero().field().q();
    k.frob = [q](const FqQuot& x) { return x.pow(q); };
    k.to_fq = [](const FqQuot& x) -> std::optional<Fq> {
        if (x.rep().degree() > 0) return std::nullopt;
        return x.rep()[0];
    };
    return k;
}

inline ResidueField<F2Ext> residue_field_f2(const FqPoly& f) {
    uint64_t m = f2_bits(f);
    const F2ExtCtx* ctx = F2Ext::context(m);
    ResidueField<F2Ext> k;
    k.theta = F2Ext(ctx, detail::f2_mod(2, m));
    k.embed = [ctx](const Fq& c) { return F2Ext(ctx, c.code()); };
    k.frob = [](const F2Ext& x) { return x * x; };
    const GF* F2 = &GF::prime(2);
    k.to_fq = [F2](const F2Ext& x) -> std::optional<Fq> {
        if (x.bits() > 1) return std::nullopt;
        return Fq(*F2, static_cast<uint32_t>(x.bits()));
    };
    return k;
}

/// Per-prime data.
struct LocalFactor {
    FqPoly f;                  // prime in θ
    int d = 0;                 // deg f
    Poly<FqPoly> c;            // c(X) = det(X - N), coefficients in A = F_q[t]
    FqPoly c_at_one, c_at_zero;  // P_m(1) = c(1)/c(0)
    std::string norm_matrix;   // N printed (empty unless requested)

    /// P_m(1) modulo u^prec.
    Laurent p_value(long prec) const { return Laurent::ratio(c_at_one, c_at_zero, prec); }
    /// P_m(1)^{-1} modulo u^prec.
    Laurent p_value_inverse(long prec) const { return Laurent::ratio(c_at_zero, c_at_one, prec); }

    /// P_m(T) = c(T)/c(0), printed with reduced fractional coefficients.
    std::string p_poly_str() const {
        std::string s;
        for (int i = 0; i <= c.degree(); ++i) {
            FqPoly num = c[i], den = c_at_zero;
            if (num.is_zero()) continue;
            FqPoly g = gcd(num, den);
            num = num / g;
            den = den / g;
            Fq l = den.lead();
            num = num * l.inv();
            den = den * l.inv();
            bool minus = !s.empty() && num.lead() == -num.lead().one();
            if (minus) num = -num;
            std::string term;
            if (den.is_one()) {
                term = num.str();
                if (num.degree() > 0 && i > 0) term = "(" + term + ")";
            } else {
                std::string ns = num.str(), ds = den.str();
                if (ns.find(' ') != std::string::npos) ns = "(" + ns + ")";
                if (ds.find(' ') != std::string::npos) ds = "(" + ds + ")";
                term = "(" + ns + "/" + ds + ")";
            }
            if (i > 0) {
                if (term == "1")
                    term = "T";
                else
                    term += "*T";
                if (i > 1) term += "^" + std::to_string(i);
            }
            if (s.empty())
                s = term;
            else
                s += (minus ? " - " : " + ") + term;
        }
        return s;
    }
};

/// N = C·σ(C)⋯σ^{d-1}(C) over k[t], c = charpoly(N) with the integrality check.
template <class K>
LocalFactor local_factor_over(const DrinfeldModule& E, const FqPoly& f, const ResidueField<K>& k, bool keep_matrix) {
    const GF& F = *E.F;
    int d = f.degree();
    auto C = motive_matrix(E, k.theta, [&](const FqPoly& p) { return k.eval(p); });
    auto frob_poly = [&](const Poly<K>& p) { return p.map([&](const K& x) { return k.frob(x); }); };
    SemilinearMap<Poly<K>> S{C, frob_poly};
    Matrix<Poly<K>> N = frobenius_norm(S, d);
    Poly<K> one = Poly<K>::constant(k.theta.one(), "t");
    Poly<Poly<K>> ch = charpoly(N, one, "X");
    LocalFactor lf;
    lf.f = f.with_var("θ");
    lf.d = d;
    FqPoly azero(Fq(F, 0), "t");
    std::vector<FqPoly> cc;
    for (int i = 0; i <= ch.degree(); ++i) {
        const Poly<K>& ci = ch[i];
        std::vector<Fq> v;
        for (int j = 0; j <= ci.degree(); ++j) {
            auto x = k.to_fq(ci[j]);
            if (!x) throw certificate_error("integrality failure: coefficient of X^" + std::to_string(i) + " is not in F_q[t] at f = " + f.str());
            v.push_back(*x);
        }
        cc.push_back(FqPoly(std::move(v), Fq(F, 0), "t"));
    }
    lf.c = Poly<FqPoly>(std::move(cc), azero, "X");
    lf.c_at_zero = lf.c[0];
    FqPoly s = azero;
    for (int i = 0; i <= lf.c.degree(); ++i) s += lf.c[i];
    lf.c_at_one = s;
    if (keep_matrix) lf.norm_matrix = N.str();
    return lf;
}

enum class FactorPath { Auto, Generic, PackedF2 };

/// Local L-factor at the monic irreducible f ∈ F_q[θ].
inline LocalFactor local_lfactor(const DrinfeldModule& E, const FqPoly& f, FactorPath path = FactorPath::Auto,
                                 bool keep_matrix = false, bool check_prime = true) {
    if (f.degree() < 1 || !f.is_monic()) throw input_error("prime must be monic of positive degree");
    if (check_prime && !is_irreducible(f)) throw input_error("f = " + f.str() + " is not irreducible");
    bool packed = E.q() == 2 && f.degree() <= 62;
    if (path == FactorPath::Generic) packed = false;
    if (path == FactorPath::PackedF2 && !packed) throw input_error("packed path needs q = 2 and deg f <= 62");
    if (packed) return local_factor_over(E, f, residue_field_f2(f), keep_matrix);
    return local_factor_over(E, f, residue_field_generic(f), keep_matrix);
}

// ---------------------------------------------------------------------------
// Torsion oracle.

namespace detail {

/// F_q-coordinates of an element of L = k[y]/(g), k = F_q[θ]/(f): index a + d*b for θ̄^a y^b.
inline std::vector<Fq> tower_coords(const Quot<FqQuot>& x, int d, int m, const GF& F) {
    std::vector<Fq> v(static_cast<size_t>(d * m), Fq(F, 0));
    for (int b = 0; b <= x.rep().degree(); ++b)
        for (int a = 0; a <= x.rep()[b].rep().degree(); ++a) v[a + d * b] = x.rep()[b].rep()[a];
    return v;
}

inline Quot<FqQuot> tower_element(const std::vector<Fq>& v, int d, int m, const std::shared_ptr<const QuotCtx<FqQuot>>& Lctx,
                                  const std::shared_ptr<const QuotCtx<Fq>>& kctx) {
    const GF& F = v[0].field();
    std::vector<FqQuot> cs;
    for (int b = 0; b < m; ++b) {
        std::vector<Fq> w(v.begin() + d * b, v.begin() + d * (b + 1));
        cs.emplace_back(kctx, FqPoly(std::move(w), Fq(F, 0), "θ"));
    }
    return Quot<FqQuot>(Lctx, Poly<FqQuot>(std::move(cs), FqQuot(kctx, FqPoly(Fq(F, 0), "θ")), "y"));
}

}  // namespace detail

/// Characteristic polynomial over A/(p) of x ↦ x^{q^{deg f}} on E[p] ⊂ k̄, k = F_q[θ]/(f),
/// found by enumerating extensions k[y]/(g) until the kernel of φ_p has dimension r·deg p.
inline Poly<FqQuot> torsion_frobenius_oracle(const DrinfeldModule& E, const FqPoly& f, const FqPoly& p, int max_ext_degree = 40) {
    const GF& F = *E.F;
    if (!is_irreducible(f)) throw input_error("f is not irreducible");
    if (!is_irreducible(p)) throw input_error("p is not irreducible");
    if (gcd(f.with_var("t"), p.with_var("t")).degree() > 0) throw input_error("p must be coprime to f");
    int d = f.degree(), dp = p.degree(), r = E.rank;
    size_t target = static_cast<size_t>(r * dp);
    auto kctx = fq_residue_ring(f.with_var("θ"), true);
    uint64_t kq = kctx->order;
    FqQuot kzero = embed(kctx, Fq(F, 0));
    FqQuot theta = kzero.gen();
    auto kev = [&](const FqPoly& x) { return x.eval_with(theta, [&](const Fq& c) { return embed(kctx, c); }); };
    TauPoly<FqPoly> php = phi(E, p.with_var("t"));
    std::vector<FqQuot> phik;
    for (auto& c : php.coeffs()) phik.push_back(kev(c));
    std::vector<FqQuot> phtk{theta};
    for (auto& c : E.a) phtk.push_back(kev(c));

    for (int m = 1; m <= max_ext_degree; ++m) {
        if (static_cast<double>(d) * m > 60) break;
        // first monic irreducible g of degree m over k in index order
        std::optional<Poly<FqQuot>> g;
        Poly<FqQuot> ylead = Poly<FqQuot>::monomial(kzero.one(), m, "y");
        for (uint64_t idx = 0; !g; ++idx) {
            std::vector<FqQuot> cs;
            uint64_t x = idx;
            for (int i = 0; i < m; ++i) {
                uint64_t code = x % kq;
                x /= kq;
                std::vector<Fq> w;
                for (int a = 0; a < d; ++a) {
                    w.emplace_back(F, static_cast<uint32_t>(code % F.q()));
                    code /= F.q();
                }
                cs.emplace_back(kctx, FqPoly(std::move(w), Fq(F, 0), "θ"));
            }
            if (x) throw infeasible_error("no irreducible of degree " + std::to_string(m) + " found");
            Poly<FqQuot> cand = Poly<FqQuot>(std::move(cs), kzero, "y") + ylead;
            if (is_irreducible_over(cand, kq)) g = cand;
        }
        auto Lctx = Quot<FqQuot>::make_ring(*g, true, kq);
        int n = d * m;
        Quot<FqQuot> Lzero(Lctx, Poly<FqQuot>(kzero, "y"));
        auto qpow = [&](const Quot<FqQuot>& x) { return x.pow(F.q()); };
        auto apply_tau = [&](const std::vector<FqQuot>& cs, const Quot<FqQuot>& x) {
            Quot<FqQuot> acc = Lzero, xi = x;
            for (size_t i = 0; i < cs.size(); ++i) {
                if (i) xi = qpow(xi);
                acc += xi * Quot<FqQuot>(Lctx, Poly<FqQuot>::constant(cs[i], "y"));
            }
            return acc;
        };
        Matrix<Fq> Phi(n, n, Fq(F, 0));
        for (int j = 0; j < n; ++j) {
            std::vector<Fq> e(n, Fq(F, 0));
            e[j] = Fq(F, 1);
            auto img = apply_tau(phik, detail::tower_element(e, d, m, Lctx, kctx));
            Phi.set_col(j, detail::tower_coords(img, d, m, F));
        }
        auto ker = kernel(Phi);
        if (ker.size() > target) throw certificate_error("torsion kernel larger than r·deg p");
        if (ker.size() < target) continue;
        // A/p-basis v_1..v_r with F_q-basis {φ_t^k v_i}
        std::vector<std::vector<Fq>> span;
        std::vector<size_t> heads;
        for (auto& w : ker) {
            Matrix<Fq> S(n, span.size() + 1, Fq(F, 0));
            for (size_t c = 0; c < span.size(); ++c) S.set_col(c, span[c]);
            S.set_col(span.size(), w);
            if (rank(S) <= span.size()) continue;
            heads.push_back(span.size());
            auto x = detail::tower_element(w, d, m, Lctx, kctx);
            for (int kk = 0; kk < dp; ++kk) {
                span.push_back(detail::tower_coords(x, d, m, F));
                x = apply_tau(phtk, x);
            }
            if (span.size() == target) break;
        }
        if (span.size() != target) throw certificate_error("failed to build an A/p-basis of E[p]");
        Matrix<Fq> B(n, target, Fq(F, 0));
        for (size_t c = 0; c < target; ++c) B.set_col(c, span[c]);
        auto pctx = fq_residue_ring(p.with_var("t"), true);
        FqQuot pzero = embed(pctx, Fq(F, 0));
        Matrix<FqQuot> M(r, r, pzero);
        uint64_t qd = 1;
        for (int i = 0; i < d; ++i) qd *= F.q();
        for (int i = 0; i < r; ++i) {
            auto v = detail::tower_element(span[heads[i]], d, m, Lctx, kctx);
            auto fv = detail::tower_coords(v.pow(qd), d, m, F);
            auto sol = solve(B, fv);
            if (!sol) throw certificate_error("Frobenius does not preserve E[p]");
            for (int j = 0; j < r; ++j) {
                std::vector<Fq> w((*sol).begin() + j * dp, (*sol).begin() + (j + 1) * dp);
                M(j, i) = FqQuot(pctx, FqPoly(std::move(w), Fq(F, 0), "t"));
            }
        }
        return charpoly(M, pzero.one(), "X");
    }
    throw infeasible_error("torsion splitting field exceeds the search budget");
}

/// c(X) reduced modulo p, for comparison with the oracle.
inline Poly<FqQuot> reduce_charpoly_mod(const Poly<FqPoly>& c, const FqPoly& p) {
    auto pctx = fq_residue_ring(p.with_var("t"), true);
    return c.map([&](const FqPoly& x) { return FqQuot(pctx, x.with_var("t")); });
}

}  // namespace goss
