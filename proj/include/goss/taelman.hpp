#pragma once

// Unit module H⁰ and class module H¹ of [Lie_E(K_∞) →exp→ E(K_∞)/E(R)] by windowed linear algebra.
//
// With c = max(0, b★), exp is an isometry of the ball θ^{-c-1}O onto itself, so
// K_∞ = R ⊕ W ⊕ ball with W = span{θ^{-1},…,θ^{-c}} and H¹ = W / π_W(exp K_∞).
// Tail certificate: π_W(exp θ^{B+1}) lies in the span of the box columns. Then
// U_B = R + ball + exp(span{θ^k : k ≤ B}) is φ_t-stable (φ_t exp(z) = exp(θz)), hence contains
// exp θ^k for every k, and the box columns span π_W(exp K_∞).

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "drinfeld.hpp"
#include "explog.hpp"
#include "matrix.hpp"
#include "special_values.hpp"

namespace goss {

struct UnitsWindow {
    long c = 0;  // window θ^{-1}..θ^{-c}
    long B = 0;  // box θ^{-c}..θ^B
    Matrix<Fq> M;  // row i ↔ θ^{-(i+1)}, column j ↔ θ^{j-c}
    std::vector<Fq> tail_column;  // π_W(exp θ^{B+1})
    bool tail_certified = false;
    long index_of(long k) const { return k + c; }
};

struct ClassUnitReport {
    size_t class_dim = 0;
    Matrix<Fq> t_action;
    FqPoly g;
    Laurent u;
    long unit_degree = 0;  // deg u = -v(u)
    size_t kernel_dim = 0;
    long c = 0, B = 0, N = 0;
};

namespace detail {

inline std::vector<Fq> window_part(const Laurent& x, long c) {
    if (x.precision() <= c) throw certificate_error("precision shortfall in window projection");
    std::vector<Fq> v;
    for (long i = 1; i <= c; ++i) v.push_back(x.coeff(i));
    return v;
}

inline Laurent window_element(const GF& F, const std::vector<Fq>& w, long prec) {
    Laurent x = Laurent::zero(F, prec, "θ");
    for (size_t i = 0; i < w.size(); ++i)
        if (!w[i].is_zero()) x = x + Laurent::monomial(w[i], static_cast<long>(i) + 1, prec, "θ");
    return x;
}

inline Laurent exact_theta_poly_series(const GF& F, const std::vector<Fq>& x, long kmin, long prec) {
    Laurent z = Laurent::zero(F, prec, "θ");
    for (size_t j = 0; j < x.size(); ++j)
        if (!x[j].is_zero()) z = z + Laurent::monomial(x[j], -(static_cast<long>(j) + kmin), prec, "θ");
    return z;
}

/// Reduction of window vectors modulo the image of the box.
struct QuotientData {
    Echelon<Fq> image;  // rref of the transposed column matrix: rows span the image
    std::vector<size_t> free;  // quotient basis e_j, j ∉ pivots
    std::vector<Fq> reduce(std::vector<Fq> w) const {
        for (size_t r = 0; r < image.pivots.size(); ++r) {
            Fq f = w[image.pivots[r]];
            if (f.is_zero()) continue;
            for (size_t j = 0; j < w.size(); ++j) w[j] -= f * image.rref(r, j);
        }
        return w;
    }
    std::vector<Fq> coords(const std::vector<Fq>& w) const {
        auto rw = reduce(w);
        std::vector<Fq> out;
        for (auto j : free) out.push_back(rw[j]);
        return out;
    }
};

inline QuotientData quotient_of(const UnitsWindow& win, const GF& F) {
    QuotientData qd;
    size_t c = static_cast<size_t>(win.c);
    if (c == 0) return qd;
    qd.image = rref(win.M.transpose());
    std::vector<bool> piv(c, false);
    for (auto p : qd.image.pivots) piv[p] = true;
    for (size_t j = 0; j < c; ++j)
        if (!piv[j]) qd.free.push_back(j);
    (void)F;
    return qd;
}

}  // namespace detail

/// exp θ^k for k = -c..B+1 modulo u^prec via exp θ^{k+1} = φ_t(exp θ^k), starting inside the ball.
/// Each φ_t step loses at most max(1, max deg a_j) digits.
inline std::vector<Laurent> exp_box_series(ExpLogData& X, long c, long B, long prec) {
    const DrinfeldModule& E = X.module();
    const GF& F = *E.F;
    long loss = std::max(1L, static_cast<long>(E.max_coeff_degree()));
    long P0 = prec + (B + c + 1) * loss;
    std::vector<Laurent> out;
    Laurent x = X.exp_eval(theta_power(F, -c, P0 + 1), P0);
    out.push_back(x.truncate(prec));
    for (long k = -c + 1; k <= B + 1; ++k) {
        x = phi_t_apply(E, x);
        if (x.precision() < prec) throw certificate_error("precision shortfall in the exp recursion");
        out.push_back(x.truncate(prec));
    }
    return out;
}

/// Window matrix of exp on the box θ^{-c}..θ^B; throws if the tail is not certified.
inline UnitsWindow exp_window(ExpLogData& X, long c, long B, long N, std::vector<Laurent>* series = nullptr) {
    const DrinfeldModule& E = X.module();
    const GF& F = *E.F;
    if (c < X.b_star()) throw input_error("window exponent c must be at least b* = " + std::to_string(X.b_star()));
    if (c < 0) throw input_error("window exponent c must be nonnegative");
    if (B < c) throw input_error("box bound B must be at least c");
    if (N <= c) throw input_error("working precision must exceed c");
    UnitsWindow win;
    win.c = c;
    win.B = B;
    win.M = Matrix<Fq>(static_cast<size_t>(c), static_cast<size_t>(B + c + 1), Fq(F, 0));
    auto ex = exp_box_series(X, c, B, N);
    for (long k = -c; k <= B; ++k) {
        size_t j = static_cast<size_t>(win.index_of(k));
        win.M.set_col(j, detail::window_part(ex[j], c));
    }
    win.tail_column = detail::window_part(ex.back(), c);
    win.tail_certified = c == 0 || solve(win.M, win.tail_column).has_value();
    if (!win.tail_certified) throw certificate_error("uncertifiable tail at B = " + std::to_string(B) + " (increase B)");
    if (series) *series = std::move(ex);
    return win;
}

/// Dimension, t-action (through φ_t) and Fitting generator of the class module.
inline void class_module(ExpLogData& X, const UnitsWindow& win, ClassUnitReport& rep) {
    const DrinfeldModule& E = X.module();
    const GF& F = *E.F;
    auto qd = detail::quotient_of(win, F);
    size_t n = qd.free.size();
    long prec = win.c + 2;
    auto act = [&](const std::vector<Fq>& w) {
        Laurent y = phi_t_apply(E, detail::window_element(F, w, prec));
        return detail::window_part(y, win.c);
    };
    // the image must be φ_t-stable modulo R + ball
    for (size_t r = 0; r < qd.image.pivots.size(); ++r) {
        std::vector<Fq> row;
        for (size_t j = 0; j < static_cast<size_t>(win.c); ++j) row.push_back(qd.image.rref(r, j));
        for (auto& x : qd.reduce(act(row)))
            if (!x.is_zero()) throw certificate_error("window image is not stable under the t-action");
    }
    rep.t_action = Matrix<Fq>(n, n, Fq(F, 0));
    for (size_t a = 0; a < n; ++a) {
        std::vector<Fq> e(static_cast<size_t>(win.c), Fq(F, 0));
        e[qd.free[a]] = Fq(F, 1);
        rep.t_action.set_col(a, qd.coords(act(e)));
    }
    rep.class_dim = n;
    rep.g = fitting_generator(rep.t_action, F, "t");
}

/// Generator of exp^{-1}(R) modulo θ^{-N}: lowest-degree box solution with leading coefficient 1,
/// corrected by log of its ball residue.
inline void unit_generator(ExpLogData& X, const UnitsWindow& win, long N, ClassUnitReport& rep,
                           const std::vector<Laurent>* box_series = nullptr) {
    const DrinfeldModule& E = X.module();
    const GF& F = *E.F;
    size_t n = static_cast<size_t>(win.B + win.c + 1);
    std::vector<std::vector<Fq>> ker;
    if (win.c == 0) {
        for (size_t j = 0; j < n; ++j) {
            std::vector<Fq> v(n, Fq(F, 0));
            v[j] = Fq(F, 1);
            ker.push_back(v);
        }
    } else {
        ker = kernel(win.M);
    }
    if (ker.empty()) throw certificate_error("empty unit solution space at B = " + std::to_string(win.B) + " (increase B)");
    // rows with reversed columns: the last echelon row has the lowest top degree
    Matrix<Fq> K(ker.size(), n, Fq(F, 0));
    for (size_t i = 0; i < ker.size(); ++i)
        for (size_t j = 0; j < n; ++j) K(i, n - 1 - j) = ker[i][j];
    auto e = rref(K);
    size_t last = e.pivots.size() - 1;
    std::vector<Fq> x(n, Fq(F, 0));
    for (size_t j = 0; j < n; ++j) x[j] = e.rref(last, n - 1 - j);
    long top = static_cast<long>(n - 1 - e.pivots[last]) - win.c;
    rep.kernel_dim = ker.size();
    if (static_cast<long>(ker.size()) != win.B - top + 1)
        throw certificate_error("unit saturation failure at B = " + std::to_string(win.B) + " (increase B)");
    long P = N + std::max(0L, top) + 1;
    Laurent z = detail::exact_theta_poly_series(F, x, -win.c, P);
    std::vector<Laurent> own;
    if (!box_series || (!box_series->empty() && box_series->front().precision() < N)) {
        own = exp_box_series(X, win.c, win.B, N);
        box_series = &own;
    }
    Laurent ez = Laurent::zero(F, N, "θ");
    for (size_t j = 0; j < n; ++j)
        if (!x[j].is_zero()) ez = ez + (*box_series)[j].truncate(N) * x[j];
    Laurent r = Laurent::from_poly(ez.principal_part(), N).with_var("θ");
    Laurent b = ez - r;
    for (long i = 1; i <= win.c && i < N; ++i)
        if (!b.coeff(i).is_zero()) throw certificate_error("box solution leaves the ball");
    Laurent lb = b.is_zero() ? Laurent::zero(F, N, "θ") : X.log_eval(b, N);
    Laurent u = z.truncate(N) - lb;
    // exp(u) = exp(z) - exp(log b) = r once exp(log b) = b
    if (!b.is_zero() && !X.exp_eval(lb, N).congruent(b)) throw certificate_error("exp(log b) != b at the working precision");
    rep.u = u;
    rep.unit_degree = top;
    rep.N = N;
}

struct TaelmanOptions {
    std::optional<long> c;
    std::optional<long> B;
    long max_extra_B = 64;
};

/// Window, class module and unit generator at working precision N, growing B until certified.
inline ClassUnitReport taelman_data(ExpLogData& X, long N, const TaelmanOptions& opt = {}) {
    long c = opt.c ? *opt.c : std::max(0L, X.b_star());
    long B = opt.B ? *opt.B : c;
    for (long extra = 0;; ++extra, ++B) {
        try {
            std::vector<Laurent> ex;
            long Nw = std::max(N, c + 1) + c;
            UnitsWindow win = exp_window(X, c, B, Nw, &ex);
            ClassUnitReport rep;
            rep.c = c;
            rep.B = B;
            class_module(X, win, rep);
            unit_generator(X, win, N + static_cast<long>(rep.class_dim), rep, &ex);
            return rep;
        } catch (const certificate_error& err) {
            std::string m = err.what();
            bool retry = m.find("increase B") != std::string::npos;
            if (!retry || opt.B || extra >= opt.max_extra_B) throw;
        }
    }
}

inline ClassUnitReport taelman_data(const DrinfeldModule& E, long N, const TaelmanOptions& opt = {}) {
    ExpLogData X(E);
    return taelman_data(X, N, opt);
}

struct CnfReport {
    bool pass = false;
    std::optional<Fq> alpha;
    Laurent lhs, rhs, residual;
    ClassUnitReport taelman;
    LValueReport lvalue;
    long prec = 0;
};

/// Compares g(θ)·u with ι(L(E*,0)) modulo θ^{-prec}.
inline CnfReport verify_cnf(const DrinfeldModule& E, long prec, int threads = 1, const TaelmanOptions& opt = {}) {
    const GF& F = *E.F;
    CnfReport rep;
    rep.prec = prec;
    rep.taelman = taelman_data(E, prec, opt);
    rep.lvalue = l_value(E, prec, threads);
    if (rep.lvalue.prec_achieved < prec) throw certificate_error("L-value precision mismatch");
    FqPoly gt = rep.taelman.g.with_var("θ");
    long big = prec + gt.degree() + std::abs(rep.taelman.unit_degree) + 2;
    Laurent lhs = Laurent::from_poly(gt, big).with_var("θ") * rep.taelman.u;
    if (lhs.precision() < prec) throw certificate_error("precision mismatch on g(θ)·u");
    rep.lhs = lhs.truncate(prec);
    rep.rhs = rep.lvalue.value.with_var("θ").truncate(prec);
    if (!rep.lhs.is_zero() && !rep.rhs.is_zero() && rep.lhs.valuation() == rep.rhs.valuation()) {
        Fq a = rep.lhs.lead() * rep.rhs.lead().inv();
        rep.residual = rep.lhs - rep.rhs * a;
        if (rep.residual.is_zero()) {
            rep.alpha = a;
            rep.pass = true;
        }
    } else {
        rep.residual = rep.lhs - rep.rhs;
    }
    (void)F;
    return rep;
}

}  // namespace goss
