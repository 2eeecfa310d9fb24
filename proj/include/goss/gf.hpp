#pragma once

// Finite fields F_q, q = p^e <= 2^16.
//
// Elements are encoded as integers 0..q-1: the base-p digits of the code are the
// coefficients (low to high) of the residue polynomial in the generator g.
// Field descriptors are interned for the lifetime of the process, so element
// values can carry a plain pointer to their descriptor.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace goss {

namespace detail {

inline bool is_prime_u32(uint32_t n) {
    if (n < 2) return false;
    for (uint32_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

}  // namespace detail

class GF {
   public:
    /// Interned descriptor for F_p[g]/(modulus). `modulus` is monic, low-to-high, degree e >= 1.
    /// For e == 1 the modulus is ignored and may be empty.
    static const GF& get(uint32_t p, std::vector<uint32_t> modulus) {
        if (!detail::is_prime_u32(p)) throw input_error("characteristic " + std::to_string(p) + " is not prime");
        if (modulus.size() <= 2) modulus = {0, 1};
        for (auto& c : modulus) c %= p;
        if (modulus.back() != 1) throw input_error("field modulus must be monic");
        uint64_t q = 1;
        for (size_t i = 1; i < modulus.size(); ++i) {
            q *= p;
            if (q > (1u << 16)) throw input_error("field size exceeds 2^16");
        }
        static std::mutex mu;
        static std::map<std::pair<uint32_t, std::vector<uint32_t>>, std::unique_ptr<GF>> registry;
        std::lock_guard<std::mutex> lock(mu);
        auto key = std::make_pair(p, modulus);
        auto it = registry.find(key);
        if (it != registry.end()) return *it->second;
        auto field = std::unique_ptr<GF>(new GF(p, std::move(modulus)));
        const GF& ref = *field;
        registry.emplace(std::move(key), std::move(field));
        return ref;
    }

    static const GF& prime(uint32_t p) { return get(p, {0, 1}); }

    /// Built-in moduli for the small extension fields; other extension fields need an explicit modulus.
    static const GF& with_order(uint32_t q) {
        auto mod = builtin_modulus(q);
        uint32_t p = 0;
        for (uint32_t c = 2; c <= q; ++c)
            if (q % c == 0) {
                p = c;
                break;
            }
        if (p == 0) throw input_error("invalid field order " + std::to_string(q));
        if (mod.empty()) {
            if (detail::is_prime_u32(q)) return prime(q);
            throw input_error("no built-in modulus for q = " + std::to_string(q) + "; supply one");
        }
        return get(p, mod);
    }

    static std::vector<uint32_t> builtin_modulus(uint32_t q) {
        switch (q) {
            case 4: return {1, 1, 1};        // g^2 + g + 1
            case 8: return {1, 1, 0, 1};     // g^3 + g + 1
            case 9: return {1, 0, 1};        // g^2 + 1
            case 16: return {1, 1, 0, 0, 1}; // g^4 + g + 1
            case 25: return {2, 1, 1};       // g^2 + g + 2
            case 27: return {1, 2, 0, 1};    // g^3 + 2g + 1
            default: return {};
        }
    }

    uint32_t p() const { return p_; }
    uint32_t e() const { return e_; }
    uint32_t q() const { return q_; }
    const std::vector<uint32_t>& modulus() const { return modulus_; }

    uint32_t add(uint32_t a, uint32_t b) const {
        if (e_ == 1) {
            uint32_t s = a + b;
            return s >= p_ ? s - p_ : s;
        }
        if (p_ == 2) return a ^ b;
        uint32_t r = 0, w = 1;
        for (uint32_t i = 0; i < e_; ++i, w *= p_) {
            uint32_t s = a % p_ + b % p_;
            if (s >= p_) s -= p_;
            r += s * w;
            a /= p_;
            b /= p_;
        }
        return r;
    }

    uint32_t neg(uint32_t a) const {
        if (p_ == 2) return a;
        if (e_ == 1) return a == 0 ? 0 : p_ - a;
        uint32_t r = 0, w = 1;
        for (uint32_t i = 0; i < e_; ++i, w *= p_) {
            uint32_t d = a % p_;
            r += (d == 0 ? 0 : p_ - d) * w;
            a /= p_;
        }
        return r;
    }

    uint32_t sub(uint32_t a, uint32_t b) const { return add(a, neg(b)); }

    uint32_t mul(uint32_t a, uint32_t b) const {
        if (a == 0 || b == 0) return 0;
        if (e_ == 1) return static_cast<uint32_t>((uint64_t(a) * b) % p_);
        uint32_t s = log_[a] + log_[b];
        if (s >= q_ - 1) s -= q_ - 1;
        return exp_[s];
    }

    uint32_t inv(uint32_t a) const {
        if (a == 0) throw std::domain_error("division by zero in F_" + std::to_string(q_));
        if (e_ == 1) return pow(a, p_ - 2);
        return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
    }

    uint32_t pow(uint32_t a, uint64_t n) const {
        uint32_t r = 1;
        while (n) {
            if (n & 1) r = mul(r, a);
            a = mul(a, a);
            n >>= 1;
        }
        return r;
    }

    /// a^p
    uint32_t frobenius(uint32_t a) const { return e_ == 1 ? a : pow(a, p_); }

    /// Embeds an integer through Z -> F_p -> F_q.
    uint32_t from_int(long long n) const {
        long long m = n % static_cast<long long>(p_);
        if (m < 0) m += p_;
        return static_cast<uint32_t>(m);
    }

    /// Code of the generator g (for e > 1).
    uint32_t generator() const { return e_ == 1 ? 0 : p_; }

    /// Residue-polynomial digits (low to high) of a code.
    std::vector<uint32_t> digits(uint32_t a) const {
        std::vector<uint32_t> d(e_);
        for (uint32_t i = 0; i < e_; ++i) {
            d[i] = a % p_;
            a /= p_;
        }
        return d;
    }

    uint32_t from_digits(const std::vector<uint32_t>& d) const {
        uint32_t r = 0, w = 1;
        for (uint32_t i = 0; i < e_; ++i, w *= p_) r += (i < d.size() ? d[i] % p_ : 0) * w;
        return r;
    }

    /// Text form: integers for prime fields, g-polynomials for extensions.
    std::string format(uint32_t a) const {
        if (e_ == 1) return std::to_string(a);
        auto d = digits(a);
        std::string s;
        for (int i = static_cast<int>(e_) - 1; i >= 0; --i) {
            if (d[i] == 0) continue;
            if (!s.empty()) s += "+";
            if (i == 0) {
                s += std::to_string(d[i]);
            } else {
                if (d[i] != 1) s += std::to_string(d[i]) + "*";
                s += "g";
                if (i > 1) s += "^" + std::to_string(i);
            }
        }
        return s.empty() ? "0" : s;
    }

    std::string name() const {
        if (e_ == 1) return "F_" + std::to_string(p_);
        return "F_" + std::to_string(q_) + "[g]/(" + modulus_string() + ")";
    }

    std::string modulus_string() const {
        std::string s;
        for (int i = static_cast<int>(e_); i >= 0; --i) {
            uint32_t c = modulus_[i];
            if (c == 0) continue;
            if (!s.empty()) s += "+";
            if (i == 0) {
                s += std::to_string(c);
            } else {
                if (c != 1) s += std::to_string(c) + "*";
                s += "g";
                if (i > 1) s += "^" + std::to_string(i);
            }
        }
        return s;
    }

   private:
    GF(uint32_t p, std::vector<uint32_t> modulus)
        : p_(p), e_(static_cast<uint32_t>(modulus.size() - 1)), modulus_(std::move(modulus)) {
        q_ = 1;
        for (uint32_t i = 0; i < e_; ++i) q_ *= p_;
        if (e_ > 1) build_tables();
    }

    // Multiplication of residue polynomials given as digit codes, reduced by the modulus.
    uint32_t slow_mul(uint32_t a, uint32_t b) const {
        auto da = digits(a), db = digits(b);
        std::vector<uint32_t> prod(2 * e_, 0);
        for (uint32_t i = 0; i < e_; ++i)
            for (uint32_t j = 0; j < e_; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
        for (int k = static_cast<int>(2 * e_) - 1; k >= static_cast<int>(e_); --k) {
            uint32_t c = prod[k];
            if (c == 0) continue;
            for (uint32_t i = 0; i <= e_; ++i) {
                uint32_t sub = (c * modulus_[i]) % p_;
                uint32_t& slot = prod[k - e_ + i];
                slot = (slot + p_ - sub) % p_;
            }
        }
        prod.resize(e_);
        return from_digits(prod);
    }

    void build_tables() {
        exp_.assign(q_ - 1, 0);
        log_.assign(q_, 0);
        std::vector<uint32_t> factors;
        uint32_t n = q_ - 1;
        for (uint32_t d = 2; d * d <= n; ++d)
            if (n % d == 0) {
                factors.push_back(d);
                while (n % d == 0) n /= d;
            }
        if (n > 1) factors.push_back(n);
        auto slow_pow = [&](uint32_t a, uint64_t k) {
            uint32_t r = 1;
            while (k) {
                if (k & 1) r = slow_mul(r, a);
                a = slow_mul(a, a);
                k >>= 1;
            }
            return r;
        };
        for (uint32_t cand = 2; cand < q_; ++cand) {
            if (slow_pow(cand, q_ - 1) != 1) continue;
            bool primitive = true;
            for (auto f : factors)
                if (slow_pow(cand, (q_ - 1) / f) == 1) {
                    primitive = false;
                    break;
                }
            if (!primitive) continue;
            uint32_t x = 1;
            for (uint32_t k = 0; k < q_ - 1; ++k) {
                exp_[k] = x;
                log_[x] = k;
                x = slow_mul(x, cand);
            }
            return;
        }
        throw input_error("modulus " + modulus_string() + " is not irreducible over F_" + std::to_string(p_));
    }

    uint32_t p_, e_, q_ = 1;
    std::vector<uint32_t> modulus_;
    std::vector<uint32_t> exp_, log_;
};

/// Element of F_q: a code plus the interned descriptor.
class Fq {
   public:
    Fq() = default;
    Fq(const GF& f, uint32_t v) : f_(&f), v_(v) {}
    static Fq from_int(const GF& f, long long n) { return Fq(f, f.from_int(n)); }

    const GF& field() const { return *f_; }
    const GF* field_ptr() const { return f_; }
    uint32_t code() const { return v_; }

    Fq zero() const { return Fq(*f_, 0); }
    Fq one() const { return Fq(*f_, 1); }
    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }

    Fq operator+(const Fq& b) const { return Fq(*f_, f_->add(v_, b.v_)); }
    Fq operator-(const Fq& b) const { return Fq(*f_, f_->sub(v_, b.v_)); }
    Fq operator-() const { return Fq(*f_, f_->neg(v_)); }
    Fq operator*(const Fq& b) const { return Fq(*f_, f_->mul(v_, b.v_)); }
    Fq& operator+=(const Fq& b) { v_ = f_->add(v_, b.v_); return *this; }
    Fq& operator-=(const Fq& b) { v_ = f_->sub(v_, b.v_); return *this; }
    Fq& operator*=(const Fq& b) { v_ = f_->mul(v_, b.v_); return *this; }
    Fq inv() const { return Fq(*f_, f_->inv(v_)); }
    Fq operator/(const Fq& b) const { return *this * b.inv(); }
    Fq pow(uint64_t n) const { return Fq(*f_, f_->pow(v_, n)); }
    Fq frobenius() const { return Fq(*f_, f_->frobenius(v_)); }

    bool operator==(const Fq& b) const { return v_ == b.v_; }
    bool operator!=(const Fq& b) const { return v_ != b.v_; }

    std::string str() const { return f_->format(v_); }

   private:
    const GF* f_ = nullptr;
    uint32_t v_ = 0;
};

/// Identity on F_q: the q-power map fixes every element.
inline Fq qpower(const Fq& a) { return a; }

}  // namespace goss
