#pragma once

// Residue rings R[y]/(m(y)) for a monic modulus m. These carry the residue
// fields k = F_q[θ]/(f), the artinian rings Λ = F_q[z]/(z^e), their tensor
// products such as Λ ⊗ k = k[z]/(z^e), and the splitting fields used by the
// torsion oracle. F2Ext is a packed variant of F_2[y]/(m) for degree < 64.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "poly.hpp"

namespace goss {

template <class R>
struct QuotCtx {
    Poly<R> modulus;
    bool is_field = false;
    uint64_t order = 0;  // number of elements when finite and known, else 0
};

template <class R>
class Quot {
   public:
    using Ctx = QuotCtx<R>;

    Quot() = default;
    Quot(std::shared_ptr<const Ctx> ctx, Poly<R> rep) : ctx_(std::move(ctx)), rep_(std::move(rep)) {
        if (rep_.degree() >= ctx_->modulus.degree()) rep_ = rep_ % ctx_->modulus;
    }

    /// Context for R[y]/(m). `is_field` is a declaration by the caller (e.g. m irreducible over a field);
    /// `base_order` is |R| when finite.
    static std::shared_ptr<const Ctx> make_ring(Poly<R> modulus, bool is_field, uint64_t base_order = 0) {
        if (modulus.degree() < 1) throw input_error("residue ring modulus must have positive degree");
        if (!modulus.is_monic()) throw input_error("residue ring modulus must be monic");
        auto ctx = std::make_shared<Ctx>();
        uint64_t order = 0;
        if (base_order) {
            order = 1;
            for (int i = 0; i < modulus.degree(); ++i) {
                if (order > (uint64_t(1) << 62) / base_order) {
                    order = 0;
                    break;
                }
                order *= base_order;
            }
        }
        ctx->modulus = std::move(modulus);
        ctx->is_field = is_field;
        ctx->order = order;
        return ctx;
    }

    const std::shared_ptr<const Ctx>& ctx() const { return ctx_; }
    const Poly<R>& rep() const { return rep_; }
    int degree() const { return ctx_->modulus.degree(); }
    const R& coeff(int i) const { return rep_[i]; }

    Quot zero() const { return Quot(ctx_, rep_.zero()); }
    Quot one() const { return Quot(ctx_, rep_.one()); }
    /// The class of y.
    Quot gen() const { return Quot(ctx_, Poly<R>::gen(rep_.coeff_zero().one(), rep_.var())); }
    Quot from_base(const R& c) const { return Quot(ctx_, Poly<R>::constant(c, rep_.var())); }

    bool is_zero() const { return rep_.is_zero(); }
    bool is_one() const { return rep_.is_one(); }

    Quot operator+(const Quot& b) const { return Quot(ctx_, rep_ + b.rep_, raw_tag{}); }
    Quot operator-(const Quot& b) const { return Quot(ctx_, rep_ - b.rep_, raw_tag{}); }
    Quot operator-() const { return Quot(ctx_, -rep_, raw_tag{}); }
    Quot operator*(const Quot& b) const { return Quot(ctx_, (rep_ * b.rep_) % ctx_->modulus, raw_tag{}); }
    Quot& operator+=(const Quot& b) { rep_ += b.rep_; return *this; }
    Quot& operator-=(const Quot& b) { rep_ -= b.rep_; return *this; }
    Quot& operator*=(const Quot& b) { return *this = *this * b; }
    Quot operator*(const R& s) const { return Quot(ctx_, rep_ * s, raw_tag{}); }

    Quot pow(uint64_t n) const {
        Quot r = one(), b = *this;
        while (n) {
            if (n & 1) r = r * b;
            b = b * b;
            n >>= 1;
        }
        return r;
    }

    /// Inverse of a unit; the coefficient ring must be a field.
    Quot inv() const {
        auto [g, s, t] = xgcd(rep_, ctx_->modulus);
        if (g.degree() != 0) throw std::domain_error("element is not a unit in the residue ring");
        return Quot(ctx_, s);
    }

    bool is_unit() const {
        if (rep_.is_zero()) return false;
        return gcd(rep_, ctx_->modulus).degree() == 0;
    }

    bool operator==(const Quot& b) const { return rep_ == b.rep_; }
    bool operator!=(const Quot& b) const { return !(*this == b); }

    uint64_t field_order() const { return ctx_->order; }

    std::string str() const { return rep_.str(); }

   private:
    struct raw_tag {};
    Quot(std::shared_ptr<const Ctx> ctx, Poly<R> rep, raw_tag) : ctx_(std::move(ctx)), rep_(std::move(rep)) {}

    std::shared_ptr<const Ctx> ctx_;
    Poly<R> rep_;
};

using FqQuot = Quot<Fq>;

/// F_q[y]/(m) with m monic; declared a field when `m_irreducible`.
inline std::shared_ptr<const QuotCtx<Fq>> fq_residue_ring(const FqPoly& m, bool m_irreducible) {
    return FqQuot::make_ring(m, m_irreducible, m.coeff_zero().field().q());
}

/// Embedding F_q -> F_q[y]/(m).
inline FqQuot embed(const std::shared_ptr<const QuotCtx<Fq>>& ctx, const Fq& c) {
    return FqQuot(ctx, FqPoly::constant(c, ctx->modulus.var()));
}

// ---------------------------------------------------------------------------
// Packed F_2[y]/(m), deg m <= 63.

struct F2ExtCtx {
    uint64_t modulus;  // bit i = coefficient of y^i, including the leading bit
    int deg;
};

class F2Ext {
   public:
    F2Ext() = default;
    F2Ext(const F2ExtCtx* ctx, uint64_t bits) : ctx_(ctx), v_(bits) {}

    static const F2ExtCtx* context(uint64_t modulus) {
        if (modulus < 2) throw input_error("packed F_2 extension needs degree >= 1");
        int deg = 63 - __builtin_clzll(modulus);
        static std::mutex mu;
        static std::map<uint64_t, std::unique_ptr<F2ExtCtx>> registry;
        std::lock_guard<std::mutex> lock(mu);
        auto& slot = registry[modulus];
        if (!slot) slot.reset(new F2ExtCtx{modulus, deg});
        return slot.get();
    }

    static uint64_t clmul_reduce(uint64_t a, uint64_t b, const F2ExtCtx& c) {
        unsigned __int128 prod = 0;
        unsigned __int128 aa = a;
        while (b) {
            if (b & 1) prod ^= aa;
            aa <<= 1;
            b >>= 1;
        }
        for (int k = 2 * c.deg - 2; k >= c.deg; --k)
            if ((prod >> k) & 1) prod ^= static_cast<unsigned __int128>(c.modulus) << (k - c.deg);
        return static_cast<uint64_t>(prod);
    }

    const F2ExtCtx* ctx() const { return ctx_; }
    uint64_t bits() const { return v_; }

    F2Ext zero() const { return F2Ext(ctx_, 0); }
    F2Ext one() const { return F2Ext(ctx_, 1); }
    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }

    F2Ext operator+(const F2Ext& b) const { return F2Ext(ctx_, v_ ^ b.v_); }
    F2Ext operator-(const F2Ext& b) const { return F2Ext(ctx_, v_ ^ b.v_); }
    F2Ext operator-() const { return *this; }
    F2Ext operator*(const F2Ext& b) const { return F2Ext(ctx_, clmul_reduce(v_, b.v_, *ctx_)); }
    F2Ext& operator+=(const F2Ext& b) { v_ ^= b.v_; return *this; }
    F2Ext& operator-=(const F2Ext& b) { v_ ^= b.v_; return *this; }
    F2Ext& operator*=(const F2Ext& b) { v_ = clmul_reduce(v_, b.v_, *ctx_); return *this; }

    F2Ext square() const { return *this * *this; }

    F2Ext pow(uint64_t n) const {
        F2Ext r = one(), b = *this;
        while (n) {
            if (n & 1) r = r * b;
            b = b * b;
            n >>= 1;
        }
        return r;
    }

    F2Ext inv() const {
        if (v_ == 0) throw std::domain_error("division by zero in packed F_2 extension");
        // |F^*| = 2^deg - 1
        return pow((uint64_t(1) << ctx_->deg) - 2);
    }

    bool operator==(const F2Ext& b) const { return v_ == b.v_; }
    bool operator!=(const F2Ext& b) const { return v_ != b.v_; }

    std::string str() const {
        std::string s;
        for (int i = 63; i >= 0; --i) {
            if (!((v_ >> i) & 1)) continue;
            if (!s.empty()) s += " + ";
            if (i == 0)
                s += "1";
            else if (i == 1)
                s += "y";
            else
                s += "y^" + std::to_string(i);
        }
        return s.empty() ? "0" : s;
    }

   private:
    const F2ExtCtx* ctx_ = nullptr;
    uint64_t v_ = 0;
};

inline uint64_t f2_bits(const FqPoly& f) {
    uint64_t b = 0;
    for (int i = 0; i <= f.degree(); ++i)
        if (!f[i].is_zero()) b |= uint64_t(1) << i;
    return b;
}

}  // namespace goss
