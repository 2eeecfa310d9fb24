#pragma once

// Dense univariate polynomials over a commutative ring R.
//
// R is any value type with zero()/one()/is_zero(), + - * and ==, and str().
// Division routines additionally need inv() on the leading coefficient of the divisor.

#include <algorithm>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "gf.hpp"

namespace goss {

template <class R>
class Poly {
   public:
    Poly() = default;
    /// Zero polynomial with coefficient ring given by `zero`.
    explicit Poly(R zero, std::string var = "t") : zero_(std::move(zero)), var_(std::move(var)) {}
    Poly(std::vector<R> coeffs, R zero, std::string var = "t")
        : zero_(std::move(zero)), var_(std::move(var)), c_(std::move(coeffs)) {
        trim();
    }

    static Poly constant(const R& c, std::string var = "t") { return Poly(std::vector<R>{c}, c.zero(), std::move(var)); }
    static Poly monomial(const R& c, int deg, std::string var = "t") {
        std::vector<R> v(deg + 1, c.zero());
        v[deg] = c;
        return Poly(std::move(v), c.zero(), std::move(var));
    }
    /// The variable itself.
    static Poly gen(const R& one, std::string var = "t") { return monomial(one, 1, std::move(var)); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_one() const { return c_.size() == 1 && c_[0] == zero_.one(); }
    bool is_constant() const { return c_.size() <= 1; }
    bool is_monic() const { return !c_.empty() && c_.back() == zero_.one(); }

    const std::vector<R>& coeffs() const { return c_; }
    const R& operator[](size_t i) const { return i < c_.size() ? c_[i] : zero_; }
    const R& lead() const { return c_.empty() ? zero_ : c_.back(); }
    const R& coeff_zero() const { return zero_; }
    const std::string& var() const { return var_; }
    Poly with_var(std::string v) const {
        Poly r = *this;
        r.var_ = std::move(v);
        return r;
    }

    Poly zero() const { return Poly(zero_, var_); }
    Poly one() const { return constant(zero_.one(), var_); }

    Poly operator+(const Poly& b) const {
        Poly r = *this;
        r += b;
        return r;
    }
    Poly& operator+=(const Poly& b) {
        if (b.c_.size() > c_.size()) c_.resize(b.c_.size(), zero_);
        for (size_t i = 0; i < b.c_.size(); ++i) c_[i] += b.c_[i];
        trim();
        return *this;
    }
    Poly operator-(const Poly& b) const {
        Poly r = *this;
        r -= b;
        return r;
    }
    Poly& operator-=(const Poly& b) {
        if (b.c_.size() > c_.size()) c_.resize(b.c_.size(), zero_);
        for (size_t i = 0; i < b.c_.size(); ++i) c_[i] -= b.c_[i];
        trim();
        return *this;
    }
    Poly operator-() const {
        Poly r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    Poly operator*(const Poly& b) const {
        if (c_.empty() || b.c_.empty()) return Poly(zero_, var_);
        std::vector<R> out(c_.size() + b.c_.size() - 1, zero_);
        for (size_t i = 0; i < c_.size(); ++i) {
            if (c_[i].is_zero()) continue;
            for (size_t j = 0; j < b.c_.size(); ++j) out[i + j] += c_[i] * b.c_[j];
        }
        return Poly(std::move(out), zero_, var_);
    }
    Poly& operator*=(const Poly& b) { return *this = *this * b; }
    Poly operator*(const R& s) const {
        Poly r = *this;
        for (auto& x : r.c_) x *= s;
        r.trim();
        return r;
    }

    /// Multiply by var^k.
    Poly shift(int k) const {
        if (c_.empty()) return *this;
        Poly r = *this;
        r.c_.insert(r.c_.begin(), k, zero_);
        return r;
    }

    /// Long division; the divisor's leading coefficient must be invertible.
    std::pair<Poly, Poly> divrem(const Poly& g) const {
        if (g.is_zero()) throw std::domain_error("division by zero polynomial");
        Poly rem = *this;
        int dg = g.degree();
        if (degree() < dg) return {Poly(zero_, var_), rem};
        R lead_inv = g.lead().inv();
        std::vector<R> quo(degree() - dg + 1, zero_);
        for (int k = degree(); k >= dg; --k) {
            if (k >= static_cast<int>(rem.c_.size())) continue;
            R c = rem.c_[k] * lead_inv;
            if (c.is_zero()) continue;
            quo[k - dg] = c;
            for (int i = 0; i <= dg; ++i) rem.c_[k - dg + i] -= c * g.c_[i];
        }
        rem.trim();
        return {Poly(std::move(quo), zero_, var_), rem};
    }
    Poly operator/(const Poly& g) const { return divrem(g).first; }
    Poly operator%(const Poly& g) const { return divrem(g).second; }

    /// Exact division; throws if there is a remainder.
    Poly exact_div(const Poly& g) const {
        auto [q, r] = divrem(g);
        if (!r.is_zero()) throw std::domain_error("inexact polynomial division");
        return q;
    }

    Poly monic() const {
        if (is_zero()) return *this;
        return *this * lead().inv();
    }

    /// Horner evaluation at x in an R-algebra S; `embed` maps coefficients into S.
    template <class S, class Embed>
    S eval_with(const S& x, Embed&& embed) const {
        S acc = x.zero();
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + embed(*it);
        return acc;
    }
    R eval(const R& x) const {
        R acc = zero_;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    Poly pow(uint64_t n) const {
        Poly r = one(), b = *this;
        while (n) {
            if (n & 1) r = r * b;
            b = b * b;
            n >>= 1;
        }
        return r;
    }

    Poly powmod(uint64_t n, const Poly& m) const {
        Poly r = one() % m, b = *this % m;
        while (n) {
            if (n & 1) r = (r * b) % m;
            b = (b * b) % m;
            n >>= 1;
        }
        return r;
    }

    Poly derivative() const {
        std::vector<R> d;
        for (size_t i = 1; i < c_.size(); ++i) {
            R acc = zero_;
            for (size_t k = 0; k < i; ++k) acc += c_[i];
            d.push_back(acc);
        }
        return Poly(std::move(d), zero_, var_);
    }

    template <class F>
    auto map(F&& f) const {
        using S = decltype(f(zero_));
        std::vector<S> out;
        out.reserve(c_.size());
        for (auto& x : c_) out.push_back(f(x));
        return Poly<S>(std::move(out), f(zero_), var_);
    }

    bool operator==(const Poly& b) const { return c_ == b.c_; }
    bool operator!=(const Poly& b) const { return !(*this == b); }

    std::string str() const {
        if (c_.empty()) return "0";
        std::string s;
        for (int i = degree(); i >= 0; --i) {
            const R& c = c_[i];
            if (c.is_zero()) continue;
            if (!s.empty()) s += " + ";
            std::string cs = c.str();
            bool compound = cs.find_first_of("+ ") != std::string::npos;
            if (i == 0) {
                s += compound ? "(" + cs + ")" : cs;
                continue;
            }
            if (!(c == zero_.one())) s += (compound ? "(" + cs + ")" : cs) + "*";
            s += var_;
            if (i > 1) s += "^" + std::to_string(i);
        }
        return s;
    }

   private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    R zero_{};
    std::string var_ = "t";
    std::vector<R> c_;
};

template <class R>
Poly<R> operator*(const R& s, const Poly<R>& p) {
    return p * s;
}

/// Monic gcd over a field.
template <class R>
Poly<R> gcd(Poly<R> a, Poly<R> b) {
    while (!b.is_zero()) {
        auto r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

/// Extended gcd over a field: returns (g, s, t) with s*a + t*b = g, g monic (or zero).
template <class R>
std::tuple<Poly<R>, Poly<R>, Poly<R>> xgcd(const Poly<R>& a, const Poly<R>& b) {
    Poly<R> r0 = a, r1 = b;
    Poly<R> s0 = a.one(), s1 = a.zero();
    Poly<R> t0 = a.zero(), t1 = a.one();
    while (!r1.is_zero()) {
        auto [q, r] = r0.divrem(r1);
        r0 = std::move(r1);
        r1 = std::move(r);
        auto s2 = s0 - q * s1;
        s0 = std::move(s1);
        s1 = std::move(s2);
        auto t2 = t0 - q * t1;
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.is_zero()) return {r0, s0, t0};
    auto li = r0.lead().inv();
    return {r0 * li, s0 * li, t0 * li};
}

using FqPoly = Poly<Fq>;

/// Polynomial over F_q from integer coefficients (low to high).
inline FqPoly fq_poly(const GF& F, std::initializer_list<long long> coeffs, std::string var = "t") {
    std::vector<Fq> v;
    for (auto c : coeffs) v.push_back(Fq::from_int(F, c));
    return FqPoly(std::move(v), Fq(F, 0), std::move(var));
}

/// f(x)^q for f with F_q coefficients: substitute x^q.
inline FqPoly qpower(const FqPoly& f) {
    if (f.is_zero()) return f;
    uint32_t q = f.coeff_zero().field().q();
    std::vector<Fq> v(static_cast<size_t>(f.degree()) * q + 1, f.coeff_zero());
    for (int i = 0; i <= f.degree(); ++i) v[static_cast<size_t>(i) * q] = f[i];
    return FqPoly(std::move(v), f.coeff_zero(), f.var());
}

/// Integer code of a polynomial over F_q of degree < n (base-q digits, low to high).
inline uint64_t poly_index(const FqPoly& f) {
    uint64_t idx = 0, w = 1;
    uint32_t q = f.coeff_zero().field().q();
    for (int i = 0; i <= f.degree(); ++i, w *= q) idx += w * f[i].code();
    return idx;
}

inline FqPoly poly_from_index(const GF& F, uint64_t idx, int len, std::string var = "t") {
    std::vector<Fq> v(len, Fq(F, 0));
    for (int i = 0; i < len; ++i) {
        v[i] = Fq(F, static_cast<uint32_t>(idx % F.q()));
        idx /= F.q();
    }
    return FqPoly(std::move(v), Fq(F, 0), std::move(var));
}

}  // namespace goss
