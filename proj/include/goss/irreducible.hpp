#pragma once

// Irreducibility testing and enumeration of monic irreducibles over F_q.

#include <cstdint>
#include <vector>

#include "poly.hpp"
#include "quotient.hpp"

namespace goss {

namespace detail {

inline std::vector<int> prime_divisors(int n) {
    std::vector<int> out;
    for (int d = 2; d * d <= n; ++d)
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    if (n > 1) out.push_back(n);
    return out;
}

// a*b mod m over F_2, everything packed; deg m <= 62.
inline uint64_t f2_mulmod(uint64_t a, uint64_t b, uint64_t m, int dm) {
    unsigned __int128 prod = 0, aa = a;
    while (b) {
        if (b & 1) prod ^= aa;
        aa <<= 1;
        b >>= 1;
    }
    for (int k = 2 * dm - 2; k >= dm; --k)
        if ((prod >> k) & 1) prod ^= static_cast<unsigned __int128>(m) << (k - dm);
    return static_cast<uint64_t>(prod);
}

inline int f2_degree(uint64_t a) { return a ? 63 - __builtin_clzll(a) : -1; }

inline uint64_t f2_mod(uint64_t a, uint64_t m) {
    int dm = f2_degree(m);
    for (int k = f2_degree(a); k >= dm; --k)
        if ((a >> k) & 1) a ^= m << (k - dm);
    return a;
}

inline uint64_t f2_gcd(uint64_t a, uint64_t b) {
    while (b) {
        a = f2_mod(a, b);
        std::swap(a, b);
    }
    return a;
}

}  // namespace detail

/// Rabin's test for a packed F_2 polynomial of degree 1..62.
inline bool f2_is_irreducible(uint64_t f) {
    int n = detail::f2_degree(f);
    if (n < 1) throw input_error("irreducibility of a constant is undefined");
    if (n > 62) throw input_error("packed F_2 irreducibility limited to degree 62");
    if (n == 1) return true;
    if (!(f & 1)) return false;
    // x^(2^i) mod f for i = 0..n
    std::vector<uint64_t> xp(n + 1);
    xp[0] = detail::f2_mod(2, f);
    for (int i = 1; i <= n; ++i) xp[i] = detail::f2_mulmod(xp[i - 1], xp[i - 1], f, n);
    if (xp[n] != xp[0]) return false;
    for (int p : detail::prime_divisors(n))
        if (detail::f2_degree(detail::f2_gcd(f, xp[n / p] ^ xp[0])) != 0) return false;
    return true;
}

/// Rabin's test over a finite field of order `field_order` (the coefficient ring of f).
template <class R>
bool is_irreducible_over(const Poly<R>& f, uint64_t field_order) {
    int n = f.degree();
    if (n < 1) throw input_error("irreducibility of a constant is undefined");
    if (n == 1) return true;
    Poly<R> g = f.monic();
    if (g[0].is_zero()) return false;
    Poly<R> x = Poly<R>::gen(g.lead(), g.var());
    std::vector<Poly<R>> xp(n + 1, x);
    for (int i = 1; i <= n; ++i) xp[i] = xp[i - 1].powmod(field_order, g);
    if (xp[n] != x) return false;
    for (int p : detail::prime_divisors(n))
        if (gcd(g, xp[n / p] - x).degree() != 0) return false;
    return true;
}

inline bool is_irreducible(const FqPoly& f) {
    if (f.degree() < 1) throw input_error("irreducibility of a constant is undefined");
    const GF& F = f.coeff_zero().field();
    if (F.q() == 2 && f.degree() <= 62) return f2_is_irreducible(f2_bits(f));
    return is_irreducible_over(f, F.q());
}

/// Oracle: trial division by every monic polynomial of degree 1..deg f / 2.
inline bool is_irreducible_trial(const FqPoly& f) {
    if (f.degree() < 1) throw input_error("irreducibility of a constant is undefined");
    const GF& F = f.coeff_zero().field();
    for (int d = 1; 2 * d <= f.degree(); ++d) {
        uint64_t count = 1;
        for (int i = 0; i < d; ++i) count *= F.q();
        for (uint64_t idx = 0; idx < count; ++idx) {
            FqPoly g = poly_from_index(F, idx, d, f.var()) + FqPoly::monomial(Fq(F, 1), d, f.var());
            if ((f % g).is_zero()) return false;
        }
    }
    return true;
}

inline uint64_t checked_power(uint64_t q, int d, uint64_t limit) {
    uint64_t r = 1;
    for (int i = 0; i < d; ++i) {
        if (r > limit / q) throw infeasible_error("enumeration of q^" + std::to_string(d) + " polynomials exceeds budget");
        r *= q;
    }
    return r;
}

constexpr uint64_t kEnumerationBudget = uint64_t(1) << 26;

/// Packed monic irreducibles over F_2 of degree <= d_max, ordered by degree then integer code.
inline std::vector<uint64_t> f2_monic_irreducibles(int d_max) {
    std::vector<uint64_t> out;
    for (int d = 1; d <= d_max; ++d) {
        uint64_t count = checked_power(2, d, kEnumerationBudget);
        uint64_t top = uint64_t(1) << d;
        for (uint64_t idx = 0; idx < count; ++idx)
            if (f2_is_irreducible(top | idx)) out.push_back(top | idx);
    }
    return out;
}

inline FqPoly f2_to_poly(uint64_t bits, std::string var = "t") {
    const GF& F = GF::prime(2);
    std::vector<Fq> v;
    for (int i = 0; i <= detail::f2_degree(bits); ++i) v.push_back(Fq(F, (bits >> i) & 1));
    return FqPoly(std::move(v), Fq(F, 0), std::move(var));
}

/// All monic irreducibles of degree <= d_max, grouped by degree; within a degree ordered by
/// the base-q code of the lower coefficients (constant term least significant).
inline std::vector<FqPoly> monic_irreducibles(const GF& F, int d_max, std::string var = "t") {
    if (d_max < 1) throw input_error("d_max must be at least 1");
    checked_power(F.q(), d_max, kEnumerationBudget);
    std::vector<FqPoly> out;
    if (F.q() == 2 && d_max <= 62) {
        for (uint64_t b : f2_monic_irreducibles(d_max)) out.push_back(f2_to_poly(b, var));
        return out;
    }
    for (int d = 1; d <= d_max; ++d) {
        uint64_t count = checked_power(F.q(), d, kEnumerationBudget);
        FqPoly lead = FqPoly::monomial(Fq(F, 1), d, var);
        for (uint64_t idx = 0; idx < count; ++idx) {
            FqPoly f = poly_from_index(F, idx, d, var) + lead;
            if (d == 1 || is_irreducible_over(f, F.q())) out.push_back(std::move(f));
        }
    }
    return out;
}

/// Number of monic irreducibles of degree exactly d (Gauss/necklace formula), for cross-checks.
inline uint64_t necklace_count(uint64_t q, int d) {
    // (1/d) * sum_{e | d} mu(e) q^(d/e)
    auto mobius = [](int n) {
        int m = 1;
        for (int p = 2; p * p <= n; ++p)
            if (n % p == 0) {
                n /= p;
                if (n % p == 0) return 0;
                m = -m;
            }
        if (n > 1) m = -m;
        return m;
    };
    long long s = 0;
    for (int e = 1; e <= d; ++e)
        if (d % e == 0) {
            long long pw = 1;
            for (int i = 0; i < d / e; ++i) pw *= static_cast<long long>(q);
            s += mobius(e) * pw;
        }
    return static_cast<uint64_t>(s / d);
}

}  // namespace goss
