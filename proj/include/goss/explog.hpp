#pragma once

// Exponential and logarithm of a Drinfeld module as series in K_∞ = F_q((θ^{-1})).
//
// exp z = Σ e_i z^{q^i}, log z = Σ l_i z^{q^i}. Coefficients are kept as exact fractions
// n_i / D_i of polynomials in θ and expanded to Laurent series on demand. Valuation bounds
// B(i) come from the recursions applied to valuations; the tail beyond the tabulated range is
// certified by a lower bound on β(i) = B(i)/q^i (see tail_beta_*).

#include <algorithm>
#include <climits>
#include <map>
#include <mutex>
#include <vector>

#include "drinfeld.hpp"
#include "laurent.hpp"

namespace goss {

constexpr long kInfVal = LONG_MAX / 8;

/// Exact fraction n/d (d ≠ 0) with d^{-1} expanded as Laurent series in the variable of d.
struct PolyFraction {
    FqPoly num, den;
    long valuation() const { return num.is_zero() ? kInfVal : den.degree() - num.degree(); }
    Laurent series(long prec) const { return Laurent::ratio(num, den, prec); }
};

/// Rational a/b with b > 0 (small integers).
struct Rat {
    __int128 n = 0, d = 1;
    bool operator<(const Rat& o) const { return n * o.d < o.n * d; }
    bool operator<=(const Rat& o) const { return n * o.d <= o.n * d; }
};

/// x^{q^k} truncated below u^limit; coefficients in F_q are fixed by the q-power map.
inline Laurent frobenius_power(const Laurent& x, int k, long limit) {
    long Q = 1;
    for (int i = 0; i < k; ++i) {
        if (Q > LONG_MAX / 4 / static_cast<long>(x.field().q())) throw infeasible_error("q-power exponent overflow");
        Q *= x.field().q();
    }
    const GF& F = x.field();
    if (x.is_zero()) return Laurent::zero(F, std::min(x.precision() * Q, limit), x.var());
    long v = x.valuation() * Q;
    long N = std::min(x.precision() * Q, limit);
    if (v >= N) return Laurent::zero(F, N, x.var());
    std::vector<Fq> c(static_cast<size_t>(N - v), Fq(F, 0));
    for (size_t i = 0; i < x.coeffs().size(); ++i) {
        long e = x.valuation() + static_cast<long>(i);
        long pos = e * Q;
        if (pos >= N) break;
        c[static_cast<size_t>(pos - v)] = x.coeffs()[i];
    }
    return Laurent(F, v, N, std::move(c), x.var());
}

class ExpLogData {
   public:
    explicit ExpLogData(const DrinfeldModule& E) : E_(E), q_(E.q()) {
        build_bounds();
        compute_b_star();
    }

    const DrinfeldModule& module() const { return E_; }
    long b_star() const { return b_star_; }
    int bound_range() const { return static_cast<int>(Bexp_.size()) - 1; }
    long B_exp(int i) const { return Bexp_.at(i); }
    long B_log(int i) const { return Blog_.at(i); }
    Rat tail_beta_exp() const { return tail_exp_; }
    Rat tail_beta_log() const { return tail_log_; }

    const PolyFraction& e(int i) {
        ensure(i);
        return e_[i];
    }
    const PolyFraction& l(int i) {
        ensure(i);
        return l_[i];
    }
    Laurent e_series(int i, long prec) { return series_cached(true, i, prec); }
    Laurent l_series(int i, long prec) { return series_cached(false, i, prec); }

    /// exp z modulo u^prec (u = θ^{-1}); the result precision may be lower if z is imprecise.
    Laurent exp_eval(const Laurent& z, long prec) { return eval(true, z, prec); }
    /// log z; requires v(z) ≥ b★.
    Laurent log_eval(const Laurent& z, long prec) {
        if (!z.is_zero() && z.valuation() < b_star_)
            throw hypothesis_error("log evaluated outside the certified ball v(z) >= " + std::to_string(b_star_));
        return eval(false, z, prec);
    }

    /// Smallest index i such that every term k ≥ i has valuation ≥ prec, or -1 if no certificate.
    int certified_cutoff(bool is_exp, long w, long prec) const {
        const auto& B = is_exp ? Bexp_ : Blog_;
        Rat L = is_exp ? tail_exp_ : tail_log_;
        int top = bound_range();
        // beyond the table: q^i (L + w) ≥ prec for all i > top, needs L + w > 0
        Rat Lw{L.n + static_cast<__int128>(w) * L.d, L.d};
        if (Lw.n <= 0) return -1;
        if (Lw.n * qpow_i(top + 1) < static_cast<__int128>(prec) * Lw.d) return -1;
        int cut = top + 1;
        for (int i = top; i >= 0; --i) {
            if (B[i] >= kInfVal) {
                cut = i;
                continue;
            }
            __int128 val = static_cast<__int128>(B[i]) + qpow_i(i) * w;
            if (val >= prec)
                cut = i;
            else
                break;
        }
        return cut;
    }

   private:
    __int128 qpow_i(int i) const {
        __int128 r = 1;
        for (int k = 0; k < i; ++k) r *= q_;
        return r;
    }

    void build_bounds() {
        int r = E_.rank;
        int top = 0;
        __int128 Q = 1;
        while (Q * q_ <= (static_cast<__int128>(1) << 40)) Q *= q_, ++top;
        Bexp_.assign(top + 1, 0);
        Blog_.assign(top + 1, 0);
        for (int n = 1; n <= top; ++n) {
            long qn = static_cast<long>(qpow_i(n));
            long be = kInfVal, bl = kInfVal;
            for (int j = 1; j <= std::min(n, r); ++j) {
                const FqPoly& a = E_.a[j - 1];
                if (a.is_zero()) continue;
                long da = a.degree();
                if (Bexp_[n - j] < kInfVal) be = std::min(be, -da + static_cast<long>(qpow_i(j)) * Bexp_[n - j]);
                if (Blog_[n - j] < kInfVal) bl = std::min(bl, Blog_[n - j] - static_cast<long>(qpow_i(n - j)) * da);
            }
            Bexp_[n] = be >= kInfVal ? kInfVal : qn + be;
            Blog_[n] = bl >= kInfVal ? kInfVal : qn + bl;
        }
        long m = E_.max_coeff_degree();
        if (qpow_i(top - r + 1) < m) throw infeasible_error("coefficient degrees too large for the valuation table");
        // exp: β(n) ≥ min_{j} β(n-j) + 1 - m/q^n ≥ min over the last r values once q^n ≥ m
        auto minbeta = [&](const std::vector<long>& B) {
            Rat L{static_cast<__int128>(kInfVal), 1};
            bool any = false;
            for (int i = top - r + 1; i <= top; ++i) {
                if (B[i] >= kInfVal) continue;
                Rat b{B[i], qpow_i(i)};
                if (!any || b < L) L = b;
                any = true;
            }
            if (!any) L = Rat{1, 1};
            return L;
        };
        tail_exp_ = minbeta(Bexp_);
        // log: β(n) ≥ 1 + min_j (β(n-j) - m)/q^j. A floor L' below the last r values persists if
        // L' ≤ (q^r - m)/(q^r - 1) when L' ≥ m, and L' ≤ (q - m)/(q - 1) when L' < m.
        Rat L = minbeta(Blog_);
        __int128 qr = qpow_i(r);
        Rat x1{qr - m, qr - 1}, x2{static_cast<__int128>(q_) - m, static_cast<__int128>(q_) - 1};
        if (x1 < L) L = x1;
        if (L < Rat{m, 1} && x2 < L) L = x2;
        tail_log_ = L;
    }

    void compute_b_star() {
        int top = bound_range();
        long b = LONG_MIN / 4;
        for (const auto* B : {&Bexp_, &Blog_})
            for (int i = 1; i <= top; ++i) {
                if ((*B)[i] >= kInfVal) continue;
                __int128 den = qpow_i(i) - 1;
                __int128 num = 1 - static_cast<__int128>((*B)[i]);
                // ceil(num/den)
                __int128 c = num >= 0 ? (num + den - 1) / den : -((-num) / den);
                b = std::max<long>(b, static_cast<long>(c));
            }
        if (b == LONG_MIN / 4) b = 0;
        // tail: q^i (L + b) ≥ 1 + b for i > top
        auto tail_ok = [&](Rat L, long bb) {
            __int128 lb = L.n + static_cast<__int128>(bb) * L.d;
            if (lb <= 0) return false;
            return lb * qpow_i(top + 1) >= static_cast<__int128>(1 + bb) * L.d;
        };
        while (!tail_ok(tail_exp_, b) || !tail_ok(tail_log_, b)) ++b;
        b_star_ = b;
    }

    void ensure(int i) {
        std::lock_guard<std::mutex> lock(mu_);
        const GF& F = *E_.F;
        if (e_.empty()) {
            FqPoly one = FqPoly::constant(Fq(F, 1), "θ");
            e_.push_back({one, one});
            l_.push_back({one, one});
            Dlog_.push_back(one);
        }
        FqPoly th = theta_poly(F);
        while (static_cast<int>(e_.size()) <= i) {
            int n = static_cast<int>(e_.size());
            FqPoly qn = th;
            for (int k = 0; k < n; ++k) qn = qpower(qn);
            FqPoly lin = qn - th;  // θ^{q^n} - θ
            // exp: D_n = lin · D_{n-1}^{(q)}
            FqPoly Dprev_q = qpower(e_[n - 1].den);
            FqPoly Dn = lin * Dprev_q;
            FqPoly num(Fq(F, 0), "θ");
            for (int j = 1; j <= std::min(n, E_.rank); ++j) {
                const FqPoly& a = E_.a[j - 1];
                if (a.is_zero()) continue;
                FqPoly nj = e_[n - j].num, dj = e_[n - j].den;
                for (int k = 0; k < j; ++k) nj = qpower(nj), dj = qpower(dj);
                num += a * nj * Dprev_q.exact_div(dj);
            }
            e_.push_back({num, Dn});
            // log: L_n = lin · L_{n-1}
            FqPoly Ln = lin * Dlog_[n - 1];
            FqPoly lnum(Fq(F, 0), "θ");
            for (int j = 1; j <= std::min(n, E_.rank); ++j) {
                FqPoly a = E_.a[j - 1];
                if (a.is_zero()) continue;
                for (int k = 0; k < n - j; ++k) a = qpower(a);
                lnum -= l_[n - j].num * a * Dlog_[n - 1].exact_div(Dlog_[n - j]);
            }
            l_.push_back({lnum, Ln});
            Dlog_.push_back(Ln);
            if (n < static_cast<int>(Bexp_.size())) {
                if (e_[n].valuation() < Bexp_[n] || l_[n].valuation() < Blog_[n])
                    throw certificate_error("coefficient valuation below its certified bound at i = " + std::to_string(n));
            }
        }
    }

    Laurent series_cached(bool is_exp, int i, long prec) {
        ensure(i);
        auto& cache = is_exp ? ecache_ : lcache_;
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = cache.find(i);
            if (it != cache.end() && it->second.precision() >= prec) return it->second.truncate(prec);
        }
        Laurent s = (is_exp ? e_[i] : l_[i]).series(prec);
        std::lock_guard<std::mutex> lock(mu_);
        cache[i] = s;
        return s;
    }

    Laurent eval(bool is_exp, const Laurent& z, long prec) {
        const GF& F = *E_.F;
        if (z.is_zero()) return Laurent::zero(F, std::min(prec, z.precision()), z.var());
        long w = z.valuation();
        int cut = certified_cutoff(is_exp, w, prec);
        if (cut < 0) throw certificate_error("no tail certificate for the series at valuation " + std::to_string(w));
        const auto& B = is_exp ? Bexp_ : Blog_;
        Laurent acc = Laurent::zero(F, prec, z.var());
        for (int i = 0; i < cut; ++i) {
            if (B[i] >= kInfVal) continue;
            long Qi = static_cast<long>(qpow_i(i));
            long need_c = prec - Qi * w;                // precision of the coefficient
            long need_z = prec - B[i];                  // precision of z^{q^i}
            Laurent zi = frobenius_power(z, i, need_z);
            Laurent ci = series_cached(is_exp, i, need_c);
            acc = acc + ci.with_var(z.var()) * zi;
        }
        return acc;
    }

    DrinfeldModule E_;
    long q_;
    std::vector<long> Bexp_, Blog_;
    Rat tail_exp_, tail_log_;
    long b_star_ = 0;
    std::vector<PolyFraction> e_, l_;
    std::vector<FqPoly> Dlog_;
    std::map<int, Laurent> ecache_, lcache_;
    std::mutex mu_;
};

/// φ_t(x) = θx + Σ a_j x^{q^j} on K_∞.
inline Laurent phi_t_apply(const DrinfeldModule& E, const Laurent& x) {
    long Nx = x.precision();
    long big = std::abs(Nx) + std::abs(x.is_zero() ? 0 : x.valuation()) + 1;
    for (int j = 0; j <= E.rank; ++j) big *= E.q();
    big += E.max_coeff_degree() + 2;
    Laurent acc = Laurent::from_poly(theta_poly(*E.F), big).with_var(x.var()) * x;
    Laurent xj = x;
    for (int j = 1; j <= E.rank; ++j) {
        xj = xj.qpow();
        if (E.a[j - 1].is_zero()) continue;
        acc = acc + Laurent::from_poly(E.a[j - 1], big).with_var(x.var()) * xj;
    }
    return acc;
}

/// θ^k as an exact-enough Laurent series in θ^{-1}.
inline Laurent theta_power(const GF& F, long k, long prec) { return Laurent::monomial(Fq(F, 1), -k, prec, "θ"); }

}  // namespace goss
