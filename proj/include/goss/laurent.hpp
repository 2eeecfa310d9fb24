#pragma once

// Truncated Laurent series in u = var^{-1} over F_q with absolute precision.
//
// A value is known modulo u^N. Coefficients c_v..c_{N-1} are stored; c_v != 0 unless the
// series is indistinguishable from zero, in which case the coefficient vector is empty and v = N.

#include <algorithm>
#include <climits>
#include <string>
#include <vector>

#include "errors.hpp"
#include "poly.hpp"

namespace goss {

class Laurent {
   public:
    Laurent() = default;

    /// The series sum_{i} coeffs[i] u^{v+i}, known modulo u^N.
    Laurent(const GF& F, long v, long N, std::vector<Fq> coeffs, std::string var = "t")
        : F_(&F), var_(std::move(var)), v_(v), N_(N), c_(std::move(coeffs)) {
        if (N_ < v_) throw input_error("Laurent series precision below its valuation");
        c_.resize(static_cast<size_t>(N_ - v_), Fq(F, 0));
        normalize();
    }

    static Laurent zero(const GF& F, long N, std::string var = "t") { return Laurent(F, N, N, {}, std::move(var)); }
    static Laurent one(const GF& F, long N, std::string var = "t") {
        return monomial(Fq(F, 1), 0, N, std::move(var));
    }
    /// c * u^k modulo u^N.
    static Laurent monomial(const Fq& c, long k, long N, std::string var = "t") {
        if (k >= N) return zero(c.field(), N, std::move(var));
        std::vector<Fq> v(static_cast<size_t>(N - k), c.zero());
        v[0] = c;
        return Laurent(c.field(), k, N, std::move(v), std::move(var));
    }
    /// Image of a polynomial in var (var^j = u^{-j}) modulo u^N.
    static Laurent from_poly(const FqPoly& f, long N) {
        const GF& F = f.coeff_zero().field();
        if (f.is_zero()) return zero(F, N, f.var());
        long v = -f.degree();
        if (v >= N) return zero(F, N, f.var());
        std::vector<Fq> c(static_cast<size_t>(N - v), Fq(F, 0));
        for (long k = v; k < N; ++k) {
            long j = -k;
            if (j >= 0 && j <= f.degree()) c[static_cast<size_t>(k - v)] = f[static_cast<size_t>(j)];
        }
        return Laurent(F, v, N, std::move(c), f.var());
    }
    /// num/den modulo u^N computed by exact power-series division (den != 0).
    static Laurent ratio(const FqPoly& num, const FqPoly& den, long N) {
        if (den.is_zero()) throw std::domain_error("Laurent ratio with zero denominator");
        const GF& F = den.coeff_zero().field();
        if (num.is_zero()) return zero(F, N, den.var());
        long v = den.degree() - num.degree();
        if (v >= N) return zero(F, N, den.var());
        size_t len = static_cast<size_t>(N - v);
        // num = var^{dn} * A(u), den = var^{dd} * B(u), with A_k = num_{dn-k}, B_k = den_{dd-k}
        auto rev = [&](const FqPoly& p, size_t k) { return k <= size_t(p.degree()) ? p[p.degree() - k] : Fq(F, 0); };
        Fq b0inv = den.lead().inv();
        std::vector<Fq> c(len, Fq(F, 0));
        for (size_t k = 0; k < len; ++k) {
            Fq acc = rev(num, k);
            size_t top = std::min<size_t>(k, static_cast<size_t>(den.degree()));
            for (size_t j = 1; j <= top; ++j) acc -= rev(den, j) * c[k - j];
            c[k] = acc * b0inv;
        }
        return Laurent(F, v, N, std::move(c), den.var());
    }

    const GF& field() const { return *F_; }
    const std::string& var() const { return var_; }
    long valuation() const { return v_; }
    long precision() const { return N_; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<Fq>& coeffs() const { return c_; }

    /// Coefficient of u^k; requires k < precision.
    Fq coeff(long k) const {
        if (k >= N_) throw certificate_error("coefficient of u^" + std::to_string(k) + " beyond precision " + std::to_string(N_));
        if (k < v_) return Fq(*F_, 0);
        return c_[static_cast<size_t>(k - v_)];
    }
    Fq lead() const {
        if (is_zero()) throw certificate_error("leading coefficient of a series indistinguishable from zero");
        return c_[0];
    }

    Laurent with_var(std::string v) const {
        Laurent r = *this;
        r.var_ = std::move(v);
        return r;
    }

    Laurent operator+(const Laurent& b) const { return combine(b, false); }
    Laurent operator-(const Laurent& b) const { return combine(b, true); }
    Laurent operator-() const {
        Laurent r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    Laurent& operator+=(const Laurent& b) { return *this = *this + b; }
    Laurent& operator-=(const Laurent& b) { return *this = *this - b; }

    Laurent operator*(const Laurent& b) const {
        check_compatible(b);
        long N = std::min(N_ + b.v_, b.N_ + v_);
        long v = v_ + b.v_;
        if (v >= N) return zero(*F_, N, var_);
        size_t len = static_cast<size_t>(N - v);
        std::vector<uint32_t> acc(len, 0);
        const GF& F = *F_;
        for (size_t i = 0; i < c_.size() && i < len; ++i) {
            if (c_[i].is_zero()) continue;
            uint32_t ai = c_[i].code();
            size_t lim = std::min(b.c_.size(), len - i);
            for (size_t j = 0; j < lim; ++j) acc[i + j] = F.add(acc[i + j], F.mul(ai, b.c_[j].code()));
        }
        std::vector<Fq> c;
        c.reserve(len);
        for (auto x : acc) c.emplace_back(F, x);
        return Laurent(F, v, N, std::move(c), var_);
    }
    Laurent& operator*=(const Laurent& b) { return *this = *this * b; }
    Laurent operator*(const Fq& s) const {
        Laurent r = *this;
        for (auto& x : r.c_) x *= s;
        r.normalize();
        return r;
    }

    /// Multiplicative inverse; the leading coefficient must be known and nonzero.
    Laurent inv() const {
        if (is_zero()) throw std::domain_error("inverse of a series indistinguishable from zero at precision " + std::to_string(N_));
        long N = N_ - 2 * v_;
        size_t len = static_cast<size_t>(N + v_);  // coefficients -v .. N-1
        const GF& F = *F_;
        uint32_t l0inv = F.inv(c_[0].code());
        std::vector<uint32_t> r(len, 0);
        for (size_t k = 0; k < len; ++k) {
            uint32_t acc = k == 0 ? 1 : 0;
            size_t top = std::min(k, c_.size() - 1);
            for (size_t j = 1; j <= top; ++j) acc = F.sub(acc, F.mul(c_[j].code(), r[k - j]));
            r[k] = F.mul(acc, l0inv);
        }
        std::vector<Fq> c;
        c.reserve(len);
        for (auto x : r) c.emplace_back(F, x);
        return Laurent(F, -v_, N, std::move(c), var_);
    }
    Laurent operator/(const Laurent& b) const { return *this * b.inv(); }

    /// Multiply by u^k.
    Laurent shift(long k) const {
        Laurent r = *this;
        r.v_ += k;
        r.N_ += k;
        return r;
    }
    /// Forget everything from u^M on.
    Laurent truncate(long M) const {
        if (M >= N_) return *this;
        if (M <= v_) return zero(*F_, M, var_);
        Laurent r = *this;
        r.c_.resize(static_cast<size_t>(M - v_));
        r.N_ = M;
        r.normalize();
        return r;
    }
    /// x^q; coefficients in F_q are fixed, so this spreads exponents by q.
    Laurent qpow() const {
        long q = F_->q();
        if (is_zero()) return zero(*F_, N_ * q, var_);
        std::vector<Fq> c(static_cast<size_t>((N_ - v_) * q), Fq(*F_, 0));
        for (size_t i = 0; i < c_.size(); ++i) c[i * q] = c_[i];
        return Laurent(*F_, v_ * q, N_ * q, std::move(c), var_);
    }
    Laurent pow(uint64_t n) const {
        if (n == 0) return one(*F_, N_ - v_, var_);
        Laurent r = *this, b = *this;
        --n;
        while (n) {
            if (n & 1) r = r * b;
            n >>= 1;
            if (n) b = b * b;
        }
        return r;
    }

    /// Polynomial part (nonpositive u-exponents) as a polynomial in var; requires precision > 0.
    FqPoly principal_part() const {
        if (N_ < 1) throw certificate_error("polynomial part not determined at precision " + std::to_string(N_));
        std::vector<Fq> v;
        for (long k = 0; k >= v_; --k) v.push_back(coeff(k));
        return FqPoly(std::move(v), Fq(*F_, 0), var_);
    }

    /// Equal as elements known modulo u^{min precision}.
    bool congruent(const Laurent& b) const {
        long M = std::min(N_, b.N_);
        for (long k = std::min(v_, b.v_); k < M; ++k)
            if (coeff(k) != b.coeff(k)) return false;
        return true;
    }
    bool operator==(const Laurent& b) const { return N_ == b.N_ && v_ == b.v_ && c_ == b.c_; }
    bool operator!=(const Laurent& b) const { return !(*this == b); }

    std::string str() const {
        std::string s;
        for (size_t i = 0; i < c_.size(); ++i) {
            if (c_[i].is_zero()) continue;
            long k = v_ + static_cast<long>(i);
            std::string cs = c_[i].str();
            bool compound = cs.find('+') != std::string::npos;
            if (compound) cs = "(" + cs + ")";
            if (!s.empty()) s += " + ";
            if (k == 0) {
                s += cs;
                continue;
            }
            if (!c_[i].is_one()) s += cs + "*";
            s += var_;
            if (k != -1) s += "^" + std::to_string(-k);
        }
        if (!s.empty()) s += " + ";
        s += "O(" + var_ + "^" + std::to_string(-N_) + ")";
        return s;
    }

   private:
    void check_compatible(const Laurent& b) const {
        if (F_ != b.F_) throw input_error("Laurent series over different fields");
    }
    Laurent combine(const Laurent& b, bool subtract) const {
        check_compatible(b);
        long N = std::min(N_, b.N_);
        long v = std::min(v_, b.v_);
        if (v >= N) return zero(*F_, N, var_);
        std::vector<Fq> c(static_cast<size_t>(N - v), Fq(*F_, 0));
        for (size_t i = 0; i < c_.size(); ++i) {
            long k = v_ + static_cast<long>(i);
            if (k >= N) break;
            c[static_cast<size_t>(k - v)] = c_[i];
        }
        for (size_t i = 0; i < b.c_.size(); ++i) {
            long k = b.v_ + static_cast<long>(i);
            if (k >= N) break;
            auto& slot = c[static_cast<size_t>(k - v)];
            slot = subtract ? slot - b.c_[i] : slot + b.c_[i];
        }
        return Laurent(*F_, v, N, std::move(c), var_);
    }
    void normalize() {
        size_t lead = 0;
        while (lead < c_.size() && c_[lead].is_zero()) ++lead;
        if (lead) {
            c_.erase(c_.begin(), c_.begin() + static_cast<long>(lead));
            v_ += static_cast<long>(lead);
        }
    }

    const GF* F_ = nullptr;
    std::string var_ = "t";
    long v_ = 0, N_ = 0;
    std::vector<Fq> c_;
};

inline Laurent qpower(const Laurent& x) { return x.qpow(); }

/// 1-unit test: valuation 0, leading coefficient 1 (hence v(x - 1) >= 1).
inline bool one_unit_check(const Laurent& x) {
    if (x.precision() < 1 || x.is_zero()) return false;
    return x.valuation() == 0 && x.lead().is_one();
}

}  // namespace goss
