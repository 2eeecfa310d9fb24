#include <gtest/gtest.h>

#include <random>

#include "goss/goss.hpp"

using namespace goss;

namespace {

DrinfeldModule module(const GF& F, std::vector<std::string> coeffs) {
    std::vector<FqPoly> a;
    for (auto& s : coeffs) a.push_back(parse_poly(F, s, "θ"));
    return make_drinfeld(F, a);
}

// Random element of θ^{-w}·F_q[[θ^{-1}]] with nonzero leading coefficient, exact to precision N.
Laurent random_small(std::mt19937_64& rng, const GF& F, long w, long N) {
    std::vector<Fq> c;
    for (long k = w; k < N; ++k) c.emplace_back(F, static_cast<uint32_t>(k == w ? 1 + rng() % (F.q() - 1) : rng() % F.q()));
    return Laurent(F, w, N, std::move(c), "θ");
}

}  // namespace

TEST(ExpLog, CarlitzCoefficientsAreExact) {
    // e_i = 1/D_i with D_i = (θ^{q^i} - θ) D_{i-1}^q
    for (uint32_t q : {2u, 3u}) {
        const GF& F = GF::with_order(q);
        ExpLogData X(carlitz(F));
        FqPoly th = theta_poly(F), D = th.one();
        for (int i = 1; i <= 4; ++i) {
            D = (th.pow(checked_power(q, i, ~0ull)) - th) * D.pow(q);
            const PolyFraction& e = X.e(i);
            ASSERT_EQ(e.num * D, e.den) << "q=" << q << " i=" << i;
            ASSERT_EQ(e.valuation(), static_cast<long>(i * checked_power(q, i, ~0ull)));
        }
    }
    // q = 2: v(e_2) = deg D_2 = 2·2^2 = 8
    ExpLogData X2(carlitz(GF::with_order(2)));
    EXPECT_EQ(X2.e(2).valuation(), 8);
}

TEST(ExpLog, CarlitzCertifiedBall) {
    ExpLogData X(carlitz(GF::with_order(2)));
    EXPECT_EQ(X.b_star(), -1);
    Laurent big = theta_power(GF::with_order(2), 3, 10);
    EXPECT_THROW(X.log_eval(big, 10), hypothesis_error);
}

TEST(ExpLog, MutualInversionAtPrecision20) {
    std::mt19937_64 rng(21);
    const GF& F2 = GF::with_order(2);
    const GF& F3 = GF::with_order(3);
    for (auto E : {carlitz(F2), carlitz(F3), module(F2, {"1", "1"}), module(F3, {"theta", "1"}), module(F2, {"theta", "1", "1"})}) {
        ExpLogData X(E);
        const long N = 20;
        long w0 = std::max<long>(1, X.b_star() + 1);
        for (int it = 0; it < 6; ++it) {
            Laurent z = random_small(rng, *E.F, w0 + static_cast<long>(rng() % 3), N);
            Laurent ez = X.exp_eval(z, N);
            Laurent lz = X.log_eval(z, N);
            ASSERT_TRUE(X.log_eval(ez, N).congruent(z)) << E.str() << " z=" << z.str();
            ASSERT_TRUE(X.exp_eval(lz, N).congruent(z)) << E.str() << " z=" << z.str();
            // exp and log are tangent to the identity
            ASSERT_EQ(ez.valuation(), z.valuation());
            ASSERT_EQ(ez.lead(), z.lead());
        }
    }
}

TEST(ExpLog, FunctionalEquationsAtPrecision20) {
    std::mt19937_64 rng(22);
    const GF& F2 = GF::with_order(2);
    const GF& F3 = GF::with_order(3);
    for (auto E : {carlitz(F2), carlitz(F3), module(F2, {"1", "1"}), module(F3, {"theta+1", "2"})}) {
        ExpLogData X(E);
        const long N = 20;
        long w0 = std::max<long>(2, X.b_star() + 2);
        for (int it = 0; it < 6; ++it) {
            Laurent z = random_small(rng, *E.F, w0 + static_cast<long>(rng() % 3), N + 1);
            // exp(θz) = φ_t(exp z)
            Laurent theta_z = Laurent::from_poly(theta_poly(*E.F), N + 2).with_var("θ") * z;
            Laurent lhs = X.exp_eval(theta_z, N);
            Laurent rhs = phi_t_apply(E, X.exp_eval(z, N + 1));
            ASSERT_TRUE(lhs.congruent(rhs)) << E.str();
            // log(φ_t z) = θ·log z
            Laurent l1 = X.log_eval(phi_t_apply(E, z), N);
            Laurent l2 = Laurent::from_poly(theta_poly(*E.F), N + 2).with_var("θ") * X.log_eval(z, N + 1);
            ASSERT_TRUE(l1.congruent(l2)) << E.str();
        }
    }
}

TEST(ExpLog, CarlitzLogOfOneMatchesSeries) {
    for (uint32_t q : {2u, 3u}) {
        const GF& F = GF::with_order(q);
        ExpLogData X(carlitz(F));
        Laurent one = Laurent::one(F, 12, "θ");
        Laurent a = X.log_eval(one, 12);
        Laurent b = carlitz_log_one_series(F, 12);
        ASSERT_FALSE(first_disagreement(a.with_var("t"), b.with_var("t")).has_value());
    }
}
