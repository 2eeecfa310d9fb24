#pragma once

// L(E*,0) = Π_m P_m(1)^{-1} as a certified truncated Euler product, and Carlitz oracles.
//
// Tail certificate: the roots of c(X) have absolute value q^{d/r} (d = deg m), so
// v(P_m(1)^{-1} - 1) ≥ ceil(d/r). Every factor is checked against this bound; primes of degree
// > r(N-1) therefore cannot change the product modulo u^N.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <limits>
#include <optional>
#include <thread>
#include <vector>

#include "drinfeld.hpp"
#include "irreducible.hpp"
#include "laurent.hpp"

namespace goss {

struct LValueReport {
    Laurent value;
    long prec_requested = 0;
    long prec_achieved = 0;
    int cutoff_degree = 0;
    size_t primes = 0;
    size_t factors_checked = 0;
    std::vector<long> worst_tail_valuation;  // per degree 1..D: min v(P^{-1} - 1)
    double seconds = 0;
};

inline int lvalue_cutoff(int rank, long prec) { return prec <= 1 ? 0 : static_cast<int>(rank * (prec - 1)); }

namespace detail {

inline long ceil_div(long a, long b) { return (a + b - 1) / b; }

/// Monic irreducibles in θ of degree ≤ D, enumerated deterministically.
inline std::vector<FqPoly> primes_in_theta(const GF& F, int D) {
    if (D < 1) return {};
    return monic_irreducibles(F, D, "θ");
}

}  // namespace detail

/// Product of P_m(1)^{-1} over the given primes, modulo u^prec, split over `threads` workers.
/// Records per-degree worst tail valuations and enforces v(P^{-1} - 1) ≥ min(prec, ceil(d/r)).
inline Laurent euler_product(const DrinfeldModule& E, const std::vector<FqPoly>& primes, long prec, int threads,
                             std::vector<long>* worst, FactorPath path = FactorPath::Auto) {
    const GF& F = *E.F;
    threads = std::max(1, threads);
    int D = 0;
    for (auto& f : primes) D = std::max(D, f.degree());
    std::vector<Laurent> partial(threads, Laurent::one(F, prec));
    std::vector<std::vector<long>> wt(threads, std::vector<long>(D + 1, std::numeric_limits<long>::max()));
    std::atomic<size_t> next{0};
    std::vector<std::exception_ptr> errs(threads);
    const size_t chunk = 64;
    auto work = [&](int tid) {
        try {
            while (true) {
                size_t begin = next.fetch_add(chunk);
                if (begin >= primes.size()) break;
                size_t end = std::min(primes.size(), begin + chunk);
                for (size_t i = begin; i < end; ++i) {
                    const FqPoly& f = primes[i];
                    LocalFactor lf = local_lfactor(E, f, path, false, false);
                    Laurent inv = lf.p_value_inverse(prec);
                    Laurent dev = inv - Laurent::one(F, prec);
                    long v = dev.valuation();
                    long need = std::min(prec, detail::ceil_div(f.degree(), E.rank));
                    if (v < need)
                        throw certificate_error("tail certificate violated at f = " + f.str() + ": v(P^{-1} - 1) = " +
                                                std::to_string(v) + " < " + std::to_string(need));
                    wt[tid][f.degree()] = std::min(wt[tid][f.degree()], v);
                    partial[tid] = partial[tid] * inv;
                }
            }
        } catch (...) {
            errs[tid] = std::current_exception();
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    Laurent acc = Laurent::one(F, prec);
    for (auto& p : partial) acc = acc * p;
    if (worst) {
        worst->assign(D + 1, std::numeric_limits<long>::max());
        for (auto& w : wt)
            for (int d = 0; d <= D; ++d) (*worst)[d] = std::min((*worst)[d], w[d]);
    }
    return acc;
}

/// L(E*,0) modulo u^prec with cutoff D = r(prec - 1) unless overridden.
inline LValueReport l_value(const DrinfeldModule& E, long prec, int threads = 1, std::optional<int> cutoff = std::nullopt) {
    if (prec < 1) throw input_error("precision must be at least 1");
    auto t0 = std::chrono::steady_clock::now();
    const GF& F = *E.F;
    int D = cutoff ? *cutoff : lvalue_cutoff(E.rank, prec);
    if (D > 0) checked_power(F.q(), D, kEnumerationBudget);
    auto primes = detail::primes_in_theta(F, D);
    LValueReport rep;
    rep.prec_requested = prec;
    rep.cutoff_degree = D;
    rep.primes = primes.size();
    rep.value = euler_product(E, primes, prec, threads, &rep.worst_tail_valuation);
    rep.factors_checked = primes.size();
    // omitted primes have degree > D, hence v ≥ ceil((D+1)/r)
    long certified = cutoff ? std::min(prec, detail::ceil_div(D + 1, E.rank)) : prec;
    rep.prec_achieved = std::min(certified, rep.value.precision());
    rep.value = rep.value.truncate(rep.prec_achieved);
    if (!one_unit_check(rep.value)) throw certificate_error("L-value is not a 1-unit: " + rep.value.str());
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

/// Σ 1/h over monic h in F_q[t] whose prime factors all have degree ≤ D, modulo u^prec.
inline Laurent carlitz_smooth_sum(const GF& F, int D, long prec) {
    if (prec < 1) throw input_error("precision must be at least 1");
    std::vector<uint32_t> acc(static_cast<size_t>(prec), 0);
    acc[0] = 1;
    int Dm = std::min<long>(D, prec - 1);
    if (Dm >= 1) {
        checked_power(F.q(), static_cast<int>(prec - 1), kEnumerationBudget);
        auto primes = monic_irreducibles(F, Dm, "t");
        FqPoly one = FqPoly::constant(Fq(F, 1), "t");
        // depth-first over multisets of primes (non-decreasing index), total degree < prec
        std::vector<std::pair<FqPoly, size_t>> stack{{one, 0}};
        while (!stack.empty()) {
            auto [h, start] = std::move(stack.back());
            stack.pop_back();
            for (size_t i = start; i < primes.size(); ++i) {
                if (h.degree() + primes[i].degree() >= prec) {
                    if (primes[i].degree() > Dm) break;
                    continue;
                }
                FqPoly hp = h * primes[i];
                Laurent s = Laurent::ratio(one, hp, prec);
                for (size_t k = 0; k < s.coeffs().size(); ++k) {
                    size_t e = static_cast<size_t>(s.valuation()) + k;
                    acc[e] = F.add(acc[e], s.coeffs()[k].code());
                }
                stack.push_back({std::move(hp), i});
            }
        }
    }
    std::vector<Fq> c;
    for (auto x : acc) c.emplace_back(F, x);
    return Laurent(F, 0, prec, std::move(c), "t");
}

/// Σ_{i≥0} (-1)^i / Π_{k=1}^{i} (t^{q^k} - t) modulo u^prec; term i has valuation Σ_{k≤i} q^k.
inline Laurent carlitz_log_one_series(const GF& F, long prec) {
    if (prec < 1) throw input_error("precision must be at least 1");
    FqPoly t = FqPoly::gen(Fq(F, 1), "t");
    FqPoly den = FqPoly::constant(Fq(F, 1), "t");
    Laurent acc = Laurent::one(F, prec);
    long val = 0, Q = 1;
    for (int i = 1;; ++i) {
        Q *= F.q();
        val += Q;
        if (val >= prec) break;
        FqPoly tq = t;
        for (int k = 0; k < i; ++k) tq = qpower(tq);
        den = den * (tq - t);
        Laurent term = Laurent::ratio(FqPoly::constant(Fq(F, 1), "t"), den, prec);
        acc = (i % 2) ? acc - term : acc + term;
    }
    return acc;
}

/// First exponent k < prec where two series differ, or nullopt.
inline std::optional<long> first_disagreement(const Laurent& a, const Laurent& b) {
    long M = std::min(a.precision(), b.precision());
    long lo = std::min(a.is_zero() ? M : a.valuation(), b.is_zero() ? M : b.valuation());
    for (long k = lo; k < M; ++k)
        if (a.coeff(k) != b.coeff(k)) return k;
    return std::nullopt;
}

struct CarlitzCheck {
    Laurent euler, smooth, log_series;
    int cutoff = 0;
    size_t primes = 0;
    std::optional<long> disagreement;
    std::string which;
    bool pass() const { return !disagreement; }
};

/// Three-way comparison for the Carlitz module at precision prec (cutoff prec - 1).
inline CarlitzCheck carlitz_check(const GF& F, long prec, int threads = 1) {
    CarlitzCheck r;
    auto rep = l_value(carlitz(F), prec, threads);
    r.euler = rep.value;
    r.cutoff = rep.cutoff_degree;
    r.primes = rep.primes;
    r.smooth = carlitz_smooth_sum(F, r.cutoff, prec);
    r.log_series = carlitz_log_one_series(F, prec);
    if (auto k = first_disagreement(r.euler, r.smooth)) {
        r.disagreement = k;
        r.which = "euler/smooth";
    } else if (auto k2 = first_disagreement(r.euler, r.log_series)) {
        r.disagreement = k2;
        r.which = "euler/log";
    }
    return r;
}

}  // namespace goss
