#pragma once

// Shtukas M₀ ⇉(i, j) M₁ over artinian coefficients Λ = F_q[z]/(z^e): affine carriers Λ⊗k,
// Čech cohomology on Λ×P¹ (∞ = [1:0], θ = x₀/x₁), L-invariants, ζ-scalars, artinian regulators
// and checkers for both trace formulas.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "irreducible.hpp"
#include "matrix.hpp"
#include "quotient.hpp"
#include "skew.hpp"

namespace goss {

using Lam = Quot<Fq>;        // Λ
using LamK = Quot<FqQuot>;   // Λ⊗k = k[z]/(z^e)

/// Λ = F_q[z]/(z^e).
struct ArtinRing {
    const GF* F = nullptr;
    int e = 1;
    std::shared_ptr<const QuotCtx<Fq>> ctx;

    static ArtinRing make(const GF& F, int e) {
        if (e < 1) throw input_error("nilpotency order e must be at least 1");
        ArtinRing L;
        L.F = &F;
        L.e = e;
        L.ctx = Lam::make_ring(FqPoly::monomial(Fq(F, 1), e, "z"), e == 1, F.q());
        return L;
    }
    long q() const { return F->q(); }
    Lam zero() const { return Lam(ctx, FqPoly(Fq(*F, 0), "z")); }
    Lam one() const { return scalar(Fq(*F, 1)); }
    Lam scalar(const Fq& c) const { return Lam(ctx, FqPoly::constant(c, "z")); }
    Lam z_power(int a) const { return a >= e ? zero() : Lam(ctx, FqPoly::monomial(Fq(*F, 1), a, "z")); }
    Lam from_coeffs(const std::vector<Fq>& c) const {
        std::vector<Fq> v(c.begin(), c.begin() + std::min<size_t>(c.size(), static_cast<size_t>(e)));
        return Lam(ctx, FqPoly(std::move(v), Fq(*F, 0), "z"));
    }
    std::vector<Fq> coeffs(const Lam& x) const {
        std::vector<Fq> v;
        for (int a = 0; a < e; ++a) v.push_back(x.coeff(a));
        return v;
    }
    /// z-adic valuation (e for zero).
    int valuation(const Lam& x) const {
        for (int a = 0; a < e; ++a)
            if (!x.coeff(a).is_zero()) return a;
        return e;
    }
    bool is_unit(const Lam& x) const { return !x.coeff(0).is_zero(); }
    Lam inv(const Lam& x) const {
        if (!is_unit(x)) throw std::domain_error("element of Λ is not a unit: " + x.str());
        return x.inv();
    }
};

/// Λ⊗k with k = F_q[θ]/(f), f monic irreducible of degree d; F_q-basis z^a θ̄^l.
struct ResidueAlgebra {
    ArtinRing L;
    FqPoly f;
    int d = 1;
    std::shared_ptr<const QuotCtx<Fq>> kctx;
    std::shared_ptr<const QuotCtx<FqQuot>> ctx;

    static ResidueAlgebra make(const ArtinRing& L, const FqPoly& f) {
        if (f.degree() < 1 || !f.is_monic()) throw input_error("residue field needs a monic prime of positive degree");
        ResidueAlgebra K;
        K.L = L;
        K.f = f.with_var("θ");
        K.d = f.degree();
        K.kctx = fq_residue_ring(K.f, true);
        uint64_t kq = K.kctx->order;
        K.ctx = LamK::make_ring(Poly<FqQuot>::monomial(k_one_of(K.kctx, *L.F), L.e, "z"), L.e == 1, kq);
        return K;
    }
    static FqQuot k_one_of(const std::shared_ptr<const QuotCtx<Fq>>& kctx, const GF& F) { return embed(kctx, Fq(F, 1)); }
    FqQuot k_zero() const { return embed(kctx, Fq(*L.F, 0)); }
    FqQuot k_one() const { return embed(kctx, Fq(*L.F, 1)); }
    FqQuot theta_bar() const { return FqQuot(kctx, FqPoly::gen(Fq(*L.F, 1), "θ")); }

    LamK zero() const { return LamK(ctx, Poly<FqQuot>(k_zero(), "z")); }
    LamK one() const { return from_k(k_one()); }
    LamK from_k(const FqQuot& c) const { return LamK(ctx, Poly<FqQuot>::constant(c, "z")); }
    LamK from_lambda(const Lam& x) const {
        std::vector<FqQuot> v;
        for (int a = 0; a < L.e; ++a) v.push_back(embed(kctx, x.coeff(a)));
        return LamK(ctx, Poly<FqQuot>(std::move(v), k_zero(), "z"));
    }
    LamK basis(int a, int l) const {
        FqQuot t = theta_bar().pow(static_cast<uint64_t>(l));
        return LamK(ctx, Poly<FqQuot>::monomial(t, a, "z"));
    }
    /// Coefficients raised to the q-th power; z is fixed.
    LamK sigma(const LamK& x) const {
        std::vector<FqQuot> v;
        for (int a = 0; a < L.e; ++a) v.push_back(x.coeff(a).pow(static_cast<uint64_t>(L.q())));
        return LamK(ctx, Poly<FqQuot>(std::move(v), k_zero(), "z"));
    }
    /// Λ-coordinates in the basis θ̄^l.
    std::vector<Lam> lambda_coords(const LamK& x) const {
        std::vector<std::vector<Fq>> c(static_cast<size_t>(d), std::vector<Fq>(static_cast<size_t>(L.e), Fq(*L.F, 0)));
        for (int a = 0; a < L.e; ++a) {
            const FqPoly& r = x.coeff(a).rep();
            for (int l = 0; l < d; ++l) c[l][a] = r[l];
        }
        std::vector<Lam> out;
        for (auto& v : c) out.push_back(L.from_coeffs(v));
        return out;
    }
    /// F_q-coordinates, index a·d + l.
    std::vector<Fq> fq_coords(const LamK& x) const {
        std::vector<Fq> out;
        for (int a = 0; a < L.e; ++a) {
            const FqPoly& r = x.coeff(a).rep();
            for (int l = 0; l < d; ++l) out.push_back(r[l]);
        }
        return out;
    }
    bool is_unit(const LamK& x) const { return !x.coeff(0).is_zero(); }
    /// Σ_k c_k θ̄^k for c_k ∈ Λ.
    LamK eval(const std::vector<Lam>& c) const {
        LamK acc = zero();
        LamK tp = one();
        LamK tb = from_k(theta_bar());
        for (size_t k = 0; k < c.size(); ++k) {
            if (k) tp = tp * tb;
            if (!c[k].is_zero()) acc += from_lambda(c[k]) * tp;
        }
        return acc;
    }
    int fq_dim() const { return L.e * d; }
};

// ---------------------------------------------------------------------------
// Finite shtukas over Λ⊗k.

struct FiniteShtuka {
    ResidueAlgebra K;
    Matrix<LamK> i, j;  // n1 × n0; j acts by v ↦ j·σ(v)
    size_t n0() const { return i.cols(); }
    size_t n1() const { return i.rows(); }
    void validate() const {
        if (i.rows() != j.rows() || i.cols() != j.cols()) throw input_error("i and j must have the same shape");
    }
};

struct AffineCohomology {
    size_t h0_dim = 0, h1_dim = 0;
    std::vector<std::vector<Fq>> h0_basis;  // F_q-coordinates on M₀
    Matrix<Fq> map;  // i − j over F_q
};

/// H⁰ = ker(i − j) and H¹ = coker(i − j) as F_q-spaces.
inline AffineCohomology affine_cohomology(const FiniteShtuka& S) {
    S.validate();
    const auto& K = S.K;
    const GF& F = *K.L.F;
    size_t D = static_cast<size_t>(K.fq_dim());
    AffineCohomology out;
    out.map = Matrix<Fq>(S.n1() * D, S.n0() * D, Fq(F, 0));
    for (size_t c = 0; c < S.n0(); ++c)
        for (int a = 0; a < K.L.e; ++a)
            for (int l = 0; l < K.d; ++l) {
                LamK x = K.basis(a, l), sx = K.sigma(x);
                size_t col = c * D + static_cast<size_t>(a * K.d + l);
                for (size_t r = 0; r < S.n1(); ++r) {
                    auto v = K.fq_coords(S.i(r, c) * x - S.j(r, c) * sx);
                    for (size_t k = 0; k < D; ++k) out.map(r * D + k, col) = v[k];
                }
            }
    out.h0_basis = kernel(out.map);
    out.h0_dim = out.h0_basis.size();
    out.h1_dim = S.n1() * D - rank(out.map);
    return out;
}

namespace detail {

inline Matrix<LamK> semilinear_power(const Matrix<LamK>& H, const ResidueAlgebra& K, int n) {
    Matrix<LamK> P = H, Hk = H;
    for (int k = 1; k < n; ++k) {
        Hk = twist(Hk, [&](const LamK& x) { return K.sigma(x); });
        P = P * Hk;
    }
    return P;
}

inline Matrix<LamK> reduce_mod_z(const Matrix<LamK>& H, const ResidueAlgebra& K) {
    return H.map([&](const LamK& x) { return K.from_k(x.coeff(0)); });
}

}  // namespace detail

struct NilpotenceReport {
    bool i_invertible = false;
    bool nilpotent = false;
    int index = 0;  // least n with (i^{-1}j)^n = 0
};

/// i^{-1}j for invertible i.
inline Matrix<LamK> shtuka_h(const FiniteShtuka& S) {
    const auto& K = S.K;
    auto inv = [&](const LamK& x) {
        if (!K.is_unit(x)) throw hypothesis_error("i is not invertible");
        return x.inv();
    };
    return inverse_adjugate(S.i, K.one(), inv) * S.j;
}

inline NilpotenceReport is_nilpotent(const FiniteShtuka& S) {
    S.validate();
    NilpotenceReport rep;
    const auto& K = S.K;
    if (!S.i.is_square()) return rep;
    if (!K.is_unit(det_laplace(S.i, K.one()))) return rep;
    rep.i_invertible = true;
    Matrix<LamK> H = shtuka_h(S);
    int bound = static_cast<int>(S.n0()) * K.fq_dim();
    Matrix<LamK> P = H, Hk = H;
    for (int n = 1; n <= std::max(bound, 1); ++n) {
        if (P.is_zero()) {
            rep.nilpotent = true;
            rep.index = n;
            return rep;
        }
        Hk = twist(Hk, [&](const LamK& x) { return K.sigma(x); });
        P = P * Hk;
    }
    return rep;
}

struct LocalL {
    FqPoly f;
    Lam value;     // det_Λ(1 − i^{-1}j | M₀)
    Lam collapse;  // det_{Λ⊗k}(1 − N), N the d-fold semilinear norm
};

/// det_Λ(1 − i^{-1}j) with the semilinear map linearized over the Λ-basis θ̄^l, cross-checked
/// against the norm collapse.
inline LocalL local_l(const FiniteShtuka& S) {
    S.validate();
    const auto& K = S.K;
    const ArtinRing& L = K.L;
    if (!S.i.is_square()) throw hypothesis_error("local L-factor needs square i");
    Matrix<LamK> H = shtuka_h(S);
    size_t n = S.n0(), d = static_cast<size_t>(K.d);
    // nilpotence modulo m_Λ
    if (!detail::semilinear_power(detail::reduce_mod_z(H, K), K, static_cast<int>(n * d)).is_zero())
        throw hypothesis_error("shtuka is not nilpotent modulo the maximal ideal of Λ at f = " + K.f.str());
    Matrix<Lam> Hl(n * d, n * d, L.zero());
    for (size_t c = 0; c < n; ++c)
        for (size_t l = 0; l < d; ++l) {
            LamK sx = K.sigma(K.basis(0, static_cast<int>(l)));
            for (size_t r = 0; r < n; ++r) {
                auto v = K.lambda_coords(H(r, c) * sx);
                for (size_t m = 0; m < d; ++m) Hl(r * d + m, c * d + l) = v[m];
            }
        }
    LocalL out;
    out.f = K.f;
    out.value = det_laplace(Matrix<Lam>::identity(n * d, L.one()) - Hl, L.one());
    Matrix<LamK> N = detail::semilinear_power(H, K, static_cast<int>(d));
    LamK cd = det_laplace(Matrix<LamK>::identity(n, K.one()) - N, K.one());
    auto cc = K.lambda_coords(cd);
    for (size_t m = 1; m < cc.size(); ++m)
        if (!cc[m].is_zero()) throw certificate_error("norm determinant is not in Λ at f = " + K.f.str());
    out.collapse = cc[0];
    if (out.collapse != out.value)
        throw certificate_error("local L-factor disagrees with the norm collapse at f = " + K.f.str());
    return out;
}

/// Polynomial in θ with coefficients in Λ (affine restriction of an entry).
using AffPoly = std::vector<Lam>;

struct GlobalL {
    Lam value;
    std::vector<LocalL> factors;
    int order = 0;  // primes of degree < order contribute
};

/// Π_{deg f < order} local_l(S mod f)^{-1} for S = (1, h·σ) over Λ⊗R, h with coefficients in I, I^order = 0.
inline GlobalL global_l(const ArtinRing& L, const std::vector<std::vector<AffPoly>>& h, int order) {
    GlobalL out;
    out.order = order;
    out.value = L.one();
    if (order <= 1 || h.empty()) return out;
    size_t n = h.size();
    for (auto& f : monic_irreducibles(*L.F, order - 1, "θ")) {
        auto K = ResidueAlgebra::make(L, f);
        FiniteShtuka S{K, Matrix<LamK>::identity(n, K.one()), Matrix<LamK>(n, n, K.zero())};
        for (size_t r = 0; r < n; ++r)
            for (size_t c = 0; c < n; ++c) S.j(r, c) = K.eval(h[r][c]);
        LocalL loc = local_l(S);
        if (!L.is_unit(loc.value)) throw certificate_error("non-unit local factor at f = " + f.str());
        out.value = out.value * L.inv(loc.value);
        out.factors.push_back(std::move(loc));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Shtukas on Λ×P¹ with M = ⊕ O(d).

/// Homogeneous polynomial Σ c_k x₀^k x₁^{deg−k} over Λ; deg < 0 means the zero entry.
struct HPoly {
    int deg = -1;
    std::vector<Lam> c;

    bool is_zero() const {
        for (auto& x : c)
            if (!x.is_zero()) return false;
        return true;
    }
    static HPoly zero(const ArtinRing& L, int deg) {
        HPoly p;
        p.deg = deg;
        if (deg >= 0) p.c.assign(static_cast<size_t>(deg) + 1, L.zero());
        return p;
    }
    /// Exponent of the largest power of x₁ dividing the entry (deg + 1 for zero).
    int x1_divisibility() const {
        for (int k = deg; k >= 0; --k)
            if (!c[k].is_zero()) return deg - k;
        return deg + 1;
    }
    AffPoly affine() const { return c; }  // x₀ = θ, x₁ = 1
    HPoly operator*(const HPoly& b) const {
        if (deg < 0 || b.deg < 0) return HPoly{deg + b.deg, {}};
        HPoly r;
        r.deg = deg + b.deg;
        r.c.assign(static_cast<size_t>(r.deg) + 1, c[0].zero());
        for (int i = 0; i <= deg; ++i)
            for (int k = 0; k <= b.deg; ++k) r.c[i + k] += c[i] * b.c[k];
        return r;
    }
    std::string str() const {
        if (is_zero()) return "0";
        std::string s;
        for (int k = deg; k >= 0; --k) {
            if (c[k].is_zero()) continue;
            if (!s.empty()) s += " + ";
            std::string cs = c[k].str();
            bool mono = k == 0 && deg - k == 0;
            s += mono ? cs : (c[k].is_one() ? "" : "(" + cs + ")*");
            std::string m;
            if (k) m += k == 1 ? "x0" : "x0^" + std::to_string(k);
            if (deg - k) m += std::string(m.empty() ? "" : "*") + (deg - k == 1 ? "x1" : "x1^" + std::to_string(deg - k));
            s += m;
        }
        return s;
    }
};

struct Witness {
    int ideal_valuation = 1;  // I = (z^k)
    int order = 1;            // I^order = 0
};

struct POneShtuka {
    ArtinRing L;
    std::vector<int> tw0, tw1;  // M₀ = ⊕ O(tw0), M₁ = ⊕ O(tw1)
    std::vector<std::vector<HPoly>> i, j;  // n1 × n0
    std::optional<Witness> witness;

    size_t n0() const { return tw0.size(); }
    size_t n1() const { return tw1.size(); }
    void validate() const {
        long q = L.q();
        if (tw0.empty() || tw1.empty()) throw input_error("shtuka needs at least one summand");
        for (int d : tw0)
            if (d > -1) throw input_error("twist " + std::to_string(d) + " must be at most -1 (H^0 vanishing)");
        for (int d : tw1)
            if (d > -1) throw input_error("twist " + std::to_string(d) + " must be at most -1 (H^0 vanishing)");
        if (i.size() != n1() || j.size() != n1()) throw input_error("i and j need one row per summand of M1");
        for (size_t r = 0; r < n1(); ++r) {
            if (i[r].size() != n0() || j[r].size() != n0()) throw input_error("i and j need one column per summand of M0");
            for (size_t c = 0; c < n0(); ++c) {
                int di = tw1[r] - tw0[c], dj = tw1[r] - static_cast<int>(q) * tw0[c];
                if (i[r][c].deg != di && !(i[r][c].is_zero()))
                    throw input_error("i(" + std::to_string(r) + "," + std::to_string(c) + ") must be homogeneous of degree " +
                                      std::to_string(di));
                if (j[r][c].deg != dj && !(j[r][c].is_zero()))
                    throw input_error("j(" + std::to_string(r) + "," + std::to_string(c) + ") must be homogeneous of degree " +
                                      std::to_string(dj));
            }
        }
    }
};

/// H¹(⊕ O(d)) basis x₀^{-a} x₁^{-b}, a, b ≥ 1, a + b = −d.
struct H1Layout {
    std::vector<int> tw;
    std::vector<size_t> offset;
    size_t dim = 0;
    explicit H1Layout(std::vector<int> t) : tw(std::move(t)) {
        for (int d : tw) {
            offset.push_back(dim);
            dim += static_cast<size_t>(std::max(0, -d - 1));
        }
    }
    static size_t summand_dim(int d) { return static_cast<size_t>(std::max(0, -d - 1)); }
};

namespace detail {

/// Block of the map H¹(O(d_src)) → H¹(O(d_dst)) induced by ξ ↦ entry·ξ (or entry·ξ^q if frob).
inline void induced_block(Matrix<Lam>& out, const HPoly& entry, int d_src, size_t row0, size_t col0, long q, bool frob) {
    if (entry.deg < 0) return;
    long s = frob ? q : 1;
    for (int a = 1; a <= -d_src - 1; ++a) {
        long A = s * a, Bx = s * (-d_src - a);
        for (int k = 0; k <= entry.deg; ++k) {
            if (entry.c[k].is_zero()) continue;
            long e0 = k - A, e1 = (entry.deg - k) - Bx;
            if (e0 <= -1 && e1 <= -1) out(row0 + static_cast<size_t>(-e0 - 1), col0 + static_cast<size_t>(a - 1)) += entry.c[k];
        }
    }
}

}  // namespace detail

struct PoneCohomology {
    H1Layout l0, l1;
    Matrix<Lam> iH, jH;  // dim H¹(M₁) × dim H¹(M₀)
};

inline Matrix<Lam> induced_on_h1(const ArtinRing& L, const std::vector<std::vector<HPoly>>& m, const H1Layout& src,
                                 const H1Layout& dst, bool frob) {
    Matrix<Lam> out(dst.dim, src.dim, L.zero());
    for (size_t r = 0; r < dst.tw.size(); ++r)
        for (size_t c = 0; c < src.tw.size(); ++c)
            detail::induced_block(out, m[r][c], src.tw[c], dst.offset[r], src.offset[c], L.q(), frob);
    return out;
}

inline PoneCohomology pone_cohomology(const POneShtuka& P) {
    P.validate();
    PoneCohomology h{H1Layout(P.tw0), H1Layout(P.tw1), {}, {}};
    h.iH = induced_on_h1(P.L, P.i, h.l0, h.l1, false);
    h.jH = induced_on_h1(P.L, P.j, h.l0, h.l1, true);
    return h;
}

namespace detail {

/// F_q-matrix of y ↦ λ·y on Λ (basis z^a).
inline void lambda_mul_block(Matrix<Fq>& m, const Lam& lam, const ArtinRing& L, size_t row0, size_t col0) {
    for (int b = 0; b < L.e; ++b)
        for (int a = 0; a + b < L.e; ++a) {
            Fq c = lam.coeff(a);
            if (!c.is_zero()) m(row0 + static_cast<size_t>(a + b), col0 + static_cast<size_t>(b)) += c;
        }
}

}  // namespace detail

/// The sheaf map h: σ*M₀ → M₀ with i∘h = j (entries homogeneous of degree tw0_r − q·tw0_c).
inline std::vector<std::vector<HPoly>> solve_h(const POneShtuka& P) {
    const ArtinRing& L = P.L;
    const GF& F = *L.F;
    long q = L.q();
    size_t n0 = P.n0(), n1 = P.n1(), e = static_cast<size_t>(L.e);
    std::vector<std::vector<HPoly>> h(n0, std::vector<HPoly>(n0));
    for (size_t c = 0; c < n0; ++c) {
        // unknowns: coefficients of h(s, c), s = 0..n0-1
        std::vector<size_t> uoff(n0 + 1, 0);
        std::vector<int> hdeg(n0);
        for (size_t s = 0; s < n0; ++s) {
            hdeg[s] = P.tw0[s] - static_cast<int>(q) * P.tw0[c];
            uoff[s + 1] = uoff[s] + (hdeg[s] >= 0 ? static_cast<size_t>(hdeg[s] + 1) * e : 0);
        }
        std::vector<size_t> eoff(n1 + 1, 0);
        std::vector<int> jdeg(n1);
        for (size_t r = 0; r < n1; ++r) {
            jdeg[r] = P.tw1[r] - static_cast<int>(q) * P.tw0[c];
            eoff[r + 1] = eoff[r] + (jdeg[r] >= 0 ? static_cast<size_t>(jdeg[r] + 1) * e : 0);
        }
        size_t nu = uoff[n0], ne = eoff[n1];
        for (size_t s = 0; s < n0; ++s) h[s][c] = HPoly::zero(L, hdeg[s]);
        if (nu == 0) {
            for (size_t r = 0; r < n1; ++r)
                if (!P.j[r][c].is_zero()) throw hypothesis_error("i^{-1} j is not regular");
            continue;
        }
        Matrix<Fq> A(ne, nu, Fq(F, 0));
        std::vector<Fq> rhs(ne, Fq(F, 0));
        for (size_t r = 0; r < n1; ++r) {
            if (jdeg[r] < 0) continue;
            for (size_t s = 0; s < n0; ++s) {
                const HPoly& is = P.i[r][s];
                if (hdeg[s] < 0 || is.deg < 0) continue;
                for (int k = 0; k <= is.deg; ++k) {
                    if (is.c[k].is_zero()) continue;
                    for (int m = 0; m <= hdeg[s]; ++m)
                        detail::lambda_mul_block(A, is.c[k], L, eoff[r] + static_cast<size_t>(k + m) * e,
                                                 uoff[s] + static_cast<size_t>(m) * e);
                }
            }
            const HPoly& jr = P.j[r][c];
            if (jr.deg >= 0)
                for (int k = 0; k <= jr.deg; ++k)
                    for (size_t a = 0; a < e; ++a) rhs[eoff[r] + static_cast<size_t>(k) * e + a] = jr.c[k].coeff(static_cast<int>(a));
        }
        auto x = solve(A, rhs);
        if (!x) throw hypothesis_error("i^{-1} j is not regular on P^1");
        if (!kernel(A).empty()) throw hypothesis_error("i is not injective, i^{-1} j is not unique");
        for (size_t s = 0; s < n0; ++s)
            for (int m = 0; m <= hdeg[s]; ++m) {
                std::vector<Fq> v(x->begin() + static_cast<long>(uoff[s] + static_cast<size_t>(m) * e),
                                  x->begin() + static_cast<long>(uoff[s] + static_cast<size_t>(m + 1) * e));
                h[s][c].c[m] = L.from_coeffs(v);
            }
    }
    return h;
}

inline std::vector<std::vector<AffPoly>> affine_part(const std::vector<std::vector<HPoly>>& m) {
    std::vector<std::vector<AffPoly>> out;
    for (auto& row : m) {
        out.emplace_back();
        for (auto& x : row) out.back().push_back(x.affine());
    }
    return out;
}

/// Witness I = (z^k) for the coefficients of the entries: k = least valuation, order = ceil(e/k).
inline std::optional<Witness> detect_witness(const ArtinRing& L, const std::vector<std::vector<HPoly>>& m) {
    int k = L.e;
    for (auto& row : m)
        for (auto& x : row)
            for (auto& c : x.c) k = std::min(k, L.valuation(c));
    if (k == 0) return std::nullopt;
    return Witness{k, (L.e + k - 1) / k};
}

inline void check_witness(const ArtinRing& L, const std::vector<std::vector<HPoly>>& m, const Witness& w) {
    if (w.ideal_valuation < 1) throw hypothesis_error("witness ideal must lie in the maximal ideal");
    if (static_cast<long>(w.ideal_valuation) * w.order < L.e) throw hypothesis_error("witness ideal I does not satisfy I^order = 0");
    for (auto& row : m)
        for (auto& x : row)
            for (auto& c : x.c)
                if (L.valuation(c) < w.ideal_valuation) throw hypothesis_error("j has a coefficient outside the witness ideal");
}

struct TraceReport {
    Lam lhs, rhs;
    std::vector<LocalL> factors;
    bool pass = false;
};

/// det_Λ(1 − j | H¹(E)) against L of the affine restriction, for i = 1.
inline TraceReport check_nilptrace(const POneShtuka& P) {
    P.validate();
    const ArtinRing& L = P.L;
    std::vector<std::string> bad;
    if (P.tw0 != P.tw1) bad.push_back("M0 and M1 differ (i must be the identity)");
    for (size_t r = 0; r < P.n1() && bad.empty(); ++r)
        for (size_t c = 0; c < P.n0(); ++c) {
            const HPoly& x = P.i[r][c];
            bool ok = r == c ? (x.deg == 0 && x.c[0] == L.one()) : x.is_zero();
            if (!ok) bad.push_back("i is not the identity");
        }
    for (auto& row : P.j)
        for (auto& x : row)
            if (!x.is_zero() && x.x1_divisibility() < 1) {
                bad.push_back("j is not divisible by x1 (not linear at infinity)");
                goto done;
            }
done:
    std::optional<Witness> w = P.witness ? P.witness : detect_witness(L, P.j);
    if (!w)
        bad.push_back("no nilpotence witness: j has unit coefficients");
    else
        try {
            check_witness(L, P.j, *w);
        } catch (const hypothesis_error& e) {
            bad.push_back(e.what());
        }
    if (!bad.empty()) {
        std::string msg = "trace formula hypotheses fail:";
        for (auto& b : bad) msg += " [" + b + "]";
        throw hypothesis_error(msg);
    }
    auto coh = pone_cohomology(P);
    TraceReport rep;
    rep.lhs = det_laplace(Matrix<Lam>::identity(coh.l0.dim, L.one()) - coh.jH, L.one());
    GlobalL g = global_l(L, affine_part(P.j), w->order);
    rep.rhs = g.value;
    rep.factors = std::move(g.factors);
    rep.pass = rep.lhs == rep.rhs;
    return rep;
}

// ---------------------------------------------------------------------------
// ζ-scalars and the artinian regulator.

/// Free kernel of a map A: Λ^n → Λ^m that is surjective mod m_Λ, via m pivot columns.
struct FreeKernel {
    Matrix<Lam> basis;       // n × (n − m), identity on the free coordinates
    std::vector<size_t> pivots, free;
    Matrix<Lam> complement;  // n × m, the pivot unit vectors
};

inline FreeKernel free_kernel(const Matrix<Lam>& A, const ArtinRing& L) {
    const GF& F = *L.F;
    size_t m = A.rows(), n = A.cols();
    Matrix<Fq> A0(m, n, Fq(F, 0));
    for (size_t r = 0; r < m; ++r)
        for (size_t c = 0; c < n; ++c) A0(r, c) = A(r, c).coeff(0);
    auto e = rref(A0);
    if (e.pivots.size() != m) throw hypothesis_error("map on H^1 is not surjective modulo the maximal ideal");
    FreeKernel k;
    k.pivots = e.pivots;
    std::vector<bool> is_piv(n, false);
    for (auto p : k.pivots) is_piv[p] = true;
    for (size_t c = 0; c < n; ++c)
        if (!is_piv[c]) k.free.push_back(c);
    std::vector<size_t> rows(m);
    for (size_t r = 0; r < m; ++r) rows[r] = r;
    Matrix<Lam> AP = A.submatrix(rows, k.pivots), AF = A.submatrix(rows, k.free);
    Matrix<Lam> APinv = inverse_adjugate(AP, L.one(), [&](const Lam& x) { return L.inv(x); });
    Matrix<Lam> X = APinv * AF;  // pivot coordinates of the kernel vectors, up to sign
    k.basis = Matrix<Lam>(n, k.free.size(), L.zero());
    for (size_t t = 0; t < k.free.size(); ++t) {
        k.basis(k.free[t], t) = L.one();
        for (size_t r = 0; r < m; ++r) k.basis(k.pivots[r], t) = -X(r, t);
    }
    k.complement = Matrix<Lam>(n, m, L.zero());
    for (size_t r = 0; r < m; ++r) k.complement(k.pivots[r], r) = L.one();
    return k;
}

/// det[basis | C] · det(A·C): the ζ-numerator (or denominator) for the complex A with kernel basis.
inline Lam zeta_factor(const Matrix<Lam>& A, const Matrix<Lam>& basis, const Matrix<Lam>& C, const ArtinRing& L) {
    if (basis.cols() + C.cols() != A.cols()) throw hypothesis_error("kernel basis and complement do not fill H^1(M0)");
    return det_laplace(basis.hcat(C), L.one()) * det_laplace(A * C, L.one());
}

/// ζ = num/den with num from (i − j, basis_M, C_M) and den from (i, basis_D, C_D).
inline Lam zeta_scalar(const PoneCohomology& h, const ArtinRing& L, const Matrix<Lam>& basis_M, const Matrix<Lam>& C_M,
                       const Matrix<Lam>& basis_D, const Matrix<Lam>& C_D) {
    if (basis_M.cols() != basis_D.cols()) throw hypothesis_error("kernels of i - j and i have different ranks");
    Lam num = zeta_factor(h.iH - h.jH, basis_M, C_M, L);
    Lam den = zeta_factor(h.iH, basis_D, C_D, L);
    if (!L.is_unit(num) || !L.is_unit(den)) throw hypothesis_error("ζ-determinants are not units");
    return num * L.inv(den);
}

/// ρ = 1 − h on ker(i − j), written in the coordinates of basis_D (a basis of ker i).
inline Matrix<Lam> artinian_regulator(const PoneCohomology& h, const Matrix<Lam>& hH, const ArtinRing& L,
                                      const Matrix<Lam>& basis_M, const FreeKernel& kerD) {
    size_t n = h.l0.dim;
    Matrix<Lam> img = (Matrix<Lam>::identity(n, L.one()) - hH) * basis_M;
    if (!(h.iH * img - (h.iH - h.jH) * basis_M).is_zero()) throw certificate_error("i∘ρ differs from i − j on the kernel");
    if (!(h.iH * img).is_zero()) throw certificate_error("ρ does not land in ker i");
    // coordinates: restriction to the free coordinates of ker i is an isomorphism
    std::vector<size_t> all(img.cols());
    for (size_t t = 0; t < all.size(); ++t) all[t] = t;
    Matrix<Lam> Bf = kerD.basis.submatrix(kerD.free, [&] {
        std::vector<size_t> v(kerD.basis.cols());
        for (size_t t = 0; t < v.size(); ++t) v[t] = t;
        return v;
    }());
    Matrix<Lam> If = img.submatrix(kerD.free, all);
    return inverse_adjugate(Bf, L.one(), [&](const Lam& x) { return L.inv(x); }) * If;
}

/// ρ maps H¹ of the shtuka complex, which sits in degree 1, so its determinant on determinant lines
/// is det(ρ|H¹)^{-1}; `pass` uses that reading, `pass_matrix_det` the literal matrix determinant.
struct ArtTraceReport {
    Lam zeta, L;
    Lam det_rho;       // det of the matrix ρ|H¹
    Lam det_rho_line;  // det(ρ|H¹)^{-1}
    Lam rhs;           // L · det_rho_line
    Lam rhs_matrix;    // L · det_rho
    bool pass = false;
    bool pass_matrix_det = false;
    bool complement_invariant = false;
    size_t kernel_rank = 0;
    Matrix<Lam> rho;
    std::vector<LocalL> factors;
};

inline ArtTraceReport check_arttrace(const POneShtuka& P, uint64_t perturb_seed = 1) {
    P.validate();
    const ArtinRing& L = P.L;
    for (auto& row : P.j)
        for (auto& x : row)
            if (!x.is_zero() && x.x1_divisibility() < 1) throw hypothesis_error("j is not divisible by x1 (not linear at infinity)");
    auto hs = solve_h(P);
    auto w = detect_witness(L, hs);
    if (!w) throw hypothesis_error("i^{-1} j has unit coefficients (no nilpotence witness)");
    auto coh = pone_cohomology(P);
    Matrix<Lam> hH = induced_on_h1(L, hs, coh.l0, coh.l0, true);
    Matrix<Lam> A = coh.iH - coh.jH;
    FreeKernel kM = free_kernel(A, L), kD = free_kernel(coh.iH, L);
    ArtTraceReport rep;
    rep.kernel_rank = kM.basis.cols();
    rep.zeta = zeta_scalar(coh, L, kM.basis, kM.complement, kD.basis, kD.complement);
    // complement change C → C + basis·R leaves ζ unchanged
    {
        std::mt19937_64 rng(perturb_seed);
        auto rnd = [&] {
            std::vector<Fq> v;
            for (int a = 0; a < L.e; ++a) v.push_back(Fq(*L.F, static_cast<uint32_t>(rng() % L.F->q())));
            return L.from_coeffs(v);
        };
        Matrix<Lam> RM(kM.basis.cols(), kM.complement.cols(), L.zero()), RD(kD.basis.cols(), kD.complement.cols(), L.zero());
        for (size_t a = 0; a < RM.rows(); ++a)
            for (size_t b = 0; b < RM.cols(); ++b) RM(a, b) = rnd();
        for (size_t a = 0; a < RD.rows(); ++a)
            for (size_t b = 0; b < RD.cols(); ++b) RD(a, b) = rnd();
        Lam z2 = zeta_scalar(coh, L, kM.basis, kM.complement + kM.basis * RM, kD.basis, kD.complement + kD.basis * RD);
        rep.complement_invariant = z2 == rep.zeta;
    }
    rep.rho = artinian_regulator(coh, hH, L, kM.basis, kD);
    rep.det_rho = det_laplace(rep.rho, L.one());
    GlobalL g = global_l(L, affine_part(hs), w->order);
    rep.L = g.value;
    rep.factors = std::move(g.factors);
    if (!L.is_unit(rep.det_rho)) throw certificate_error("artinian regulator is not invertible");
    rep.det_rho_line = L.inv(rep.det_rho);
    rep.rhs = rep.L * rep.det_rho_line;
    rep.rhs_matrix = rep.L * rep.det_rho;
    rep.pass = rep.zeta == rep.rhs;
    rep.pass_matrix_det = rep.zeta == rep.rhs_matrix;
    return rep;
}

// ---------------------------------------------------------------------------
// Random families.

namespace detail {

inline Lam random_lambda(std::mt19937_64& rng, const ArtinRing& L, int min_val) {
    std::vector<Fq> v(static_cast<size_t>(L.e), Fq(*L.F, 0));
    for (int a = min_val; a < L.e; ++a) v[a] = Fq(*L.F, static_cast<uint32_t>(rng() % L.F->q()));
    return L.from_coeffs(v);
}

/// Random homogeneous entry with coefficients of valuation ≥ min_val, divisible by x₁^{div}.
inline HPoly random_hpoly(std::mt19937_64& rng, const ArtinRing& L, int deg, int min_val, int div) {
    HPoly p = HPoly::zero(L, deg);
    for (int k = 0; k <= deg - div; ++k) p.c[k] = random_lambda(rng, L, min_val);
    return p;
}

}  // namespace detail

struct RandomShtukaOptions {
    std::vector<int> qs{2, 3};
    int max_e = 3;
    std::vector<int> twists{-2, -3};
    int max_size = 2;
};

/// i = 1 and j with coefficients in zΛ divisible by x₁.
inline POneShtuka random_nilptrace_instance(std::mt19937_64& rng, const RandomShtukaOptions& o = {}) {
    const GF& F = GF::with_order(static_cast<uint32_t>(o.qs[rng() % o.qs.size()]));
    int e = 2 + static_cast<int>(rng() % static_cast<uint64_t>(std::max(1, o.max_e - 1)));
    ArtinRing L = ArtinRing::make(F, e);
    size_t n = 1 + rng() % static_cast<uint64_t>(o.max_size);
    POneShtuka P;
    P.L = L;
    for (size_t k = 0; k < n; ++k) P.tw0.push_back(o.twists[rng() % o.twists.size()]);
    P.tw1 = P.tw0;
    long q = F.q();
    P.i.assign(n, std::vector<HPoly>(n));
    P.j.assign(n, std::vector<HPoly>(n));
    for (size_t r = 0; r < n; ++r)
        for (size_t c = 0; c < n; ++c) {
            P.i[r][c] = HPoly::zero(L, P.tw1[r] - P.tw0[c]);
            if (r == c) P.i[r][c].c[0] = L.one();
            P.j[r][c] = detail::random_hpoly(rng, L, P.tw1[r] - static_cast<int>(q) * P.tw0[c], 1, 1);
        }
    return P;
}

/// M₁ twists = M₀ twists + m_r (m_r ∈ {0,1}), i = diag(x₁^{m_r})·U with U a random constant unit-determinant
/// matrix (block-diagonal on equal twists), j with coefficients in zΛ divisible by x₁^{max(1, 2·max m)}.
inline POneShtuka random_arttrace_instance(std::mt19937_64& rng, const RandomShtukaOptions& o = {}) {
    const GF& F = GF::with_order(static_cast<uint32_t>(o.qs[rng() % o.qs.size()]));
    int e = 2 + static_cast<int>(rng() % static_cast<uint64_t>(std::max(1, o.max_e - 1)));
    ArtinRing L = ArtinRing::make(F, e);
    size_t n = 1 + rng() % static_cast<uint64_t>(o.max_size);
    POneShtuka P;
    P.L = L;
    std::vector<int> m(n);
    int M = 0;
    for (size_t k = 0; k < n; ++k) {
        P.tw0.push_back(o.twists[rng() % o.twists.size()]);
        m[k] = static_cast<int>(rng() % 2);
        M = std::max(M, m[k]);
        P.tw1.push_back(P.tw0[k] + m[k]);
    }
    // U: random over Λ, block-diagonal on equal M₀ twists, unit determinant
    Matrix<Lam> U(n, n, L.zero());
    while (true) {
        for (size_t r = 0; r < n; ++r)
            for (size_t c = 0; c < n; ++c) U(r, c) = P.tw0[r] == P.tw0[c] ? detail::random_lambda(rng, L, 0) : L.zero();
        if (L.is_unit(det_laplace(U, L.one()))) break;
    }
    long q = F.q();
    P.i.assign(n, std::vector<HPoly>(n));
    P.j.assign(n, std::vector<HPoly>(n));
    int div = std::max(1, 2 * M);
    for (size_t r = 0; r < n; ++r)
        for (size_t c = 0; c < n; ++c) {
            P.i[r][c] = HPoly::zero(L, P.tw1[r] - P.tw0[c]);
            if (P.tw0[r] == P.tw0[c]) P.i[r][c].c[0] = U(r, c);  // x₁^{m_r}·U_rc
            P.j[r][c] = detail::random_hpoly(rng, L, P.tw1[r] - static_cast<int>(q) * P.tw0[c], 1, div);
        }
    return P;
}

/// Random nilpotent finite shtuka: i invertible, i^{-1}j = N₀ + z·H with N₀ strictly upper triangular over k.
inline FiniteShtuka random_nilpotent_finite(std::mt19937_64& rng, const RandomShtukaOptions& o = {}) {
    const GF& F = GF::with_order(static_cast<uint32_t>(o.qs[rng() % o.qs.size()]));
    int e = 1 + static_cast<int>(rng() % static_cast<uint64_t>(o.max_e));
    ArtinRing L = ArtinRing::make(F, e);
    int d = 1 + static_cast<int>(rng() % 2);
    auto primes = monic_irreducibles(F, d, "θ");
    std::vector<FqPoly> deg_d;
    for (auto& f : primes)
        if (f.degree() == d) deg_d.push_back(f);
    ResidueAlgebra K = ResidueAlgebra::make(L, deg_d[rng() % deg_d.size()]);
    size_t n = 1 + rng() % static_cast<uint64_t>(o.max_size);
    auto rnd_k = [&] {
        std::vector<Fq> v;
        for (int l = 0; l < d; ++l) v.push_back(Fq(F, static_cast<uint32_t>(rng() % F.q())));
        return FqQuot(K.kctx, FqPoly(std::move(v), Fq(F, 0), "θ"));
    };
    auto rnd = [&](int min_val) {
        std::vector<FqQuot> v(static_cast<size_t>(e), K.k_zero());
        for (int a = min_val; a < e; ++a) v[a] = rnd_k();
        return LamK(K.ctx, Poly<FqQuot>(std::move(v), K.k_zero(), "z"));
    };
    Matrix<LamK> I(n, n, K.zero()), H(n, n, K.zero());
    while (true) {
        for (size_t r = 0; r < n; ++r)
            for (size_t c = 0; c < n; ++c) I(r, c) = rnd(0);
        if (K.is_unit(det_laplace(I, K.one()))) break;
    }
    for (size_t r = 0; r < n; ++r)
        for (size_t c = 0; c < n; ++c) H(r, c) = rnd(1) + (c > r ? K.from_k(rnd_k()) : K.zero());
    return FiniteShtuka{K, I, I * H};
}

}  // namespace goss
