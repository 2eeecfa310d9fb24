#pragma once

// Skew polynomial rings K{τ} with τ·r = σ(r)·τ, and σ-semilinear maps given by a matrix.

#include <functional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "matrix.hpp"

namespace goss {

template <class R>
using Twist = std::function<R(const R&)>;

/// Σ c_i τ^i, coefficients on the left.
template <class R>
class TauPoly {
   public:
    TauPoly() = default;
    TauPoly(std::vector<R> coeffs, R zero, Twist<R> sigma) : zero_(std::move(zero)), sigma_(std::move(sigma)), c_(std::move(coeffs)) {
        trim();
    }
    static TauPoly constant(const R& c, Twist<R> sigma) { return TauPoly({c}, c.zero(), std::move(sigma)); }
    static TauPoly tau(const R& one, Twist<R> sigma) { return TauPoly({one.zero(), one}, one.zero(), std::move(sigma)); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const R& operator[](size_t i) const { return i < c_.size() ? c_[i] : zero_; }
    const std::vector<R>& coeffs() const { return c_; }
    const Twist<R>& sigma() const { return sigma_; }

    TauPoly zero() const { return TauPoly({}, zero_, sigma_); }
    TauPoly one() const { return TauPoly({zero_.one()}, zero_, sigma_); }

    TauPoly operator+(const TauPoly& b) const {
        std::vector<R> v(std::max(c_.size(), b.c_.size()), zero_);
        for (size_t i = 0; i < c_.size(); ++i) v[i] += c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) v[i] += b.c_[i];
        return TauPoly(std::move(v), zero_, sigma_);
    }
    TauPoly operator-(const TauPoly& b) const { return *this + (-b); }
    TauPoly operator-() const {
        std::vector<R> v = c_;
        for (auto& x : v) x = -x;
        return TauPoly(std::move(v), zero_, sigma_);
    }
    /// (Σ a_i τ^i)(Σ b_j τ^j) = Σ a_i σ^i(b_j) τ^{i+j}
    TauPoly operator*(const TauPoly& b) const {
        if (is_zero() || b.is_zero()) return zero();
        std::vector<R> v(c_.size() + b.c_.size() - 1, zero_);
        std::vector<R> tb = b.c_;  // σ^i(b_j), updated as i grows
        for (size_t i = 0; i < c_.size(); ++i) {
            if (i > 0)
                for (auto& x : tb) x = sigma_(x);
            if (c_[i].is_zero()) continue;
            for (size_t j = 0; j < tb.size(); ++j) v[i + j] += c_[i] * tb[j];
        }
        return TauPoly(std::move(v), zero_, sigma_);
    }
    TauPoly operator*(const R& s) const {  // right scalar: f·s = Σ c_i σ^i(s) τ^i
        return *this * constant(s, sigma_);
    }

    /// Operator evaluation Σ c_i σ^i(x).
    R apply(const R& x) const {
        R acc = zero_, xi = x;
        for (size_t i = 0; i < c_.size(); ++i) {
            if (i > 0) xi = sigma_(xi);
            if (!c_[i].is_zero()) acc += c_[i] * xi;
        }
        return acc;
    }

    bool operator==(const TauPoly& b) const { return c_ == b.c_; }
    bool operator!=(const TauPoly& b) const { return !(*this == b); }

    std::string str() const {
        if (c_.empty()) return "0";
        std::string s;
        for (size_t i = 0; i < c_.size(); ++i) {
            if (c_[i].is_zero()) continue;
            if (!s.empty()) s += " + ";
            std::string cs = c_[i].str();
            bool compound = cs.find_first_of("+ ") != std::string::npos;
            if (i == 0) {
                s += cs;
                continue;
            }
            if (!c_[i].is_one()) s += (compound ? "(" + cs + ")" : cs) + "*";
            s += "T";
            if (i > 1) s += "^" + std::to_string(i);
        }
        return s;
    }

   private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    R zero_{};
    Twist<R> sigma_;
    std::vector<R> c_;
};

template <class R>
TauPoly<R> tau_mul(const TauPoly<R>& a, const TauPoly<R>& b) {
    return a * b;
}
template <class R>
R tau_apply(const TauPoly<R>& f, const R& x) {
    return f.apply(x);
}

/// v ↦ C·σ(v), σ applied entrywise.
template <class R>
struct SemilinearMap {
    Matrix<R> C;
    Twist<R> sigma;

    std::vector<R> apply(const std::vector<R>& v) const {
        std::vector<R> tv;
        tv.reserve(v.size());
        for (auto& x : v) tv.push_back(sigma(x));
        return C.apply(tv);
    }
    Matrix<R> twisted(int times) const {
        Matrix<R> m = C;
        for (int i = 0; i < times; ++i) m = twist(m, sigma);
        return m;
    }
};

/// Matrix of the d-fold composite S^d: N = C·σ(C)·…·σ^{d-1}(C).
template <class R>
Matrix<R> frobenius_norm(const SemilinearMap<R>& S, int d) {
    if (d < 1) throw input_error("frobenius_norm needs d >= 1");
    Matrix<R> N = S.C, Ci = S.C;
    for (int i = 1; i < d; ++i) {
        Ci = twist(Ci, S.sigma);
        N = N * Ci;
    }
    return N;
}

}  // namespace goss
