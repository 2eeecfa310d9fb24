#include <gtest/gtest.h>

#include <random>

#include "goss/goss.hpp"

using namespace goss;

namespace {

FqPoly random_poly(std::mt19937_64& rng, const GF& F, int deg, std::string var) {
    std::vector<Fq> c;
    for (int i = 0; i <= deg; ++i) c.emplace_back(F, static_cast<uint32_t>(rng() % F.q()));
    return FqPoly(std::move(c), Fq(F, 0), var);
}

TauPoly<FqPoly> random_tau(std::mt19937_64& rng, const GF& F, int deg) {
    std::vector<FqPoly> c;
    for (int i = 0; i <= deg; ++i) c.push_back(random_poly(rng, F, static_cast<int>(rng() % 3), "θ"));
    return TauPoly<FqPoly>(std::move(c), FqPoly(Fq(F, 0), "θ"), r_frobenius());
}

DrinfeldModule module(const GF& F, std::vector<std::string> coeffs) {
    std::vector<FqPoly> a;
    for (auto& s : coeffs) a.push_back(parse_poly(F, s, "θ"));
    return make_drinfeld(F, a);
}

// Test modules for ranks 1-3 over q = 2, 3.
std::vector<DrinfeldModule> test_modules() {
    const GF& F2 = GF::with_order(2);
    const GF& F3 = GF::with_order(3);
    return {carlitz(F2),
            module(F2, {"1", "1"}),
            module(F2, {"theta", "1"}),
            module(F2, {"theta^2+1", "theta", "1"}),
            carlitz(F3),
            module(F3, {"1", "2"}),
            module(F3, {"theta+1", "0", "1"})};
}

}  // namespace

TEST(Skew, Associativity1000Triples) {
    std::mt19937_64 rng(11);
    for (uint32_t q : {2u, 3u, 4u}) {
        const GF& F = GF::with_order(q);
        int n = q == 2 ? 400 : 300;
        for (int it = 0; it < n; ++it) {
            auto a = random_tau(rng, F, static_cast<int>(rng() % 3));
            auto b = random_tau(rng, F, static_cast<int>(rng() % 3));
            auto c = random_tau(rng, F, static_cast<int>(rng() % 3));
            ASSERT_EQ((a * b) * c, a * (b * c));
            ASSERT_EQ(a * (b + c), a * b + a * c);
            ASSERT_EQ((a + b) * c, a * c + b * c);
        }
    }
}

TEST(Skew, ActionIsCompatibleWithProduct) {
    std::mt19937_64 rng(12);
    const GF& F = GF::with_order(3);
    for (int it = 0; it < 200; ++it) {
        auto a = random_tau(rng, F, 2), b = random_tau(rng, F, 2);
        FqPoly x = random_poly(rng, F, 2, "θ");
        ASSERT_EQ((a * b).apply(x), a.apply(b.apply(x)));
    }
}

TEST(Skew, CommutationRule) {
    const GF& F = GF::with_order(3);
    FqPoly th = theta_poly(F);
    auto tau = TauPoly<FqPoly>::tau(th.one(), r_frobenius());
    auto c = TauPoly<FqPoly>::constant(th, r_frobenius());
    // τ·θ = θ^q·τ
    EXPECT_EQ((tau * c)[1], th.pow(3));
}

TEST(Drinfeld, PhiIsARingHomomorphism) {
    std::mt19937_64 rng(13);
    for (auto& E : test_modules()) {
        const GF& F = *E.F;
        for (int it = 0; it < 20; ++it) {
            FqPoly a = random_poly(rng, F, static_cast<int>(rng() % 3), "t");
            FqPoly b = random_poly(rng, F, static_cast<int>(rng() % 3), "t");
            ASSERT_EQ(phi(E, a * b), phi(E, a) * phi(E, b));
            ASSERT_EQ(phi(E, a + b), phi(E, a) + phi(E, b));
            // constant term of φ_a is a(θ), τ-degree is r·deg a
            if (!a.is_zero()) {
                ASSERT_EQ(phi(E, a)[0], a.with_var("θ"));
                ASSERT_EQ(phi(E, a).degree(), E.rank * a.degree());
            }
        }
        // φ_c = c for constants
        for (uint32_t c = 1; c < F.q(); ++c) {
            auto pc = phi(E, FqPoly::constant(Fq(F, c), "t"));
            ASSERT_EQ(pc.degree(), 0);
            ASSERT_EQ(pc[0], FqPoly::constant(Fq(F, c), "θ"));
        }
    }
}

TEST(Drinfeld, RejectsBadReduction) {
    const GF& F = GF::with_order(2);
    EXPECT_THROW(module(F, {"1", "theta"}), hypothesis_error);
    EXPECT_THROW(make_drinfeld(F, {}), input_error);
}

TEST(LocalFactor, CarlitzAnchor) {
    // P(T) = 1 - T/f, i.e. c(X) = X - f(t)
    const GF& F = GF::with_order(2);
    auto E = carlitz(F);
    auto ps = monic_irreducibles(F, 8, "θ");
    ASSERT_GE(ps.size(), 50u);
    for (size_t k = 0; k < 50; ++k) {
        auto lf = local_lfactor(E, ps[k]);
        FqPoly f = ps[k].with_var("t");
        ASSERT_EQ(lf.c.degree(), 1);
        ASSERT_TRUE(lf.c[1].is_one());
        ASSERT_EQ(lf.c[0], -f);
    }
    EXPECT_EQ(local_lfactor(E, theta_poly(F)).p_poly_str(), "1 - (1/t)*T");
}

TEST(LocalFactor, Rank2AtTheta) {
    const GF& F = GF::with_order(2);
    auto lf = local_lfactor(module(F, {"1", "1"}), theta_poly(F));
    EXPECT_EQ(lf.c.str(), "X^2 + X + t");
}

TEST(LocalFactor, PrecisionOneIsOneUnit) {
    const GF& F = GF::with_order(3);
    auto lf = local_lfactor(module(F, {"1", "2"}), parse_poly(F, "theta^2+1", "θ"));
    Laurent v = lf.p_value(1);
    EXPECT_EQ(v.coeff(0), Fq(F, 1));
}

TEST(LocalFactor, IntegralityAndWeightBounds) {
    for (auto& E : test_modules()) {
        const GF& F = *E.F;
        int dmax = F.q() == 2 ? 6 : (E.rank == 3 ? 4 : 5);
        for (auto& f : monic_irreducibles(F, dmax, "θ")) {
            LocalFactor lf = local_lfactor(E, f);  // throws certificate_error if c ∉ A[X]
            int d = f.degree(), r = E.rank;
            ASSERT_EQ(lf.c.degree(), r);
            ASSERT_TRUE(lf.c[r].is_one());
            // c(0) = ε·f(t) with ε ∈ F_q^×
            FqPoly c0 = lf.c[0], ft = f.with_var("t");
            ASSERT_EQ(c0.degree(), d);
            ASSERT_EQ(c0 * c0.lead().inv(), ft);
            // Riemann hypothesis: deg_t c_i <= (r - i)·d / r
            for (int i = 0; i < r; ++i) ASSERT_LE(lf.c[i].degree() * r, (r - i) * d) << E.str() << " at " << f.str();
        }
    }
}

TEST(LocalFactor, PackedAndGenericPathsAgree) {
    const GF& F = GF::with_order(2);
    for (auto E : {carlitz(F), module(F, {"1", "1"}), module(F, {"theta^2+1", "theta", "1"})})
        for (auto& f : monic_irreducibles(F, 7, "θ")) {
            auto a = local_lfactor(E, f, FactorPath::Generic), b = local_lfactor(E, f, FactorPath::PackedF2);
            ASSERT_EQ(a.c, b.c) << E.str() << " at " << f.str();
        }
}

TEST(LocalFactor, RejectsReduciblePrime) {
    const GF& F = GF::with_order(2);
    EXPECT_THROW(local_lfactor(carlitz(F), parse_poly(F, "theta^2+1", "θ")), input_error);
}

TEST(LocalFactor, TorsionOracleAgreement) {
    // c(X) mod p against the characteristic polynomial of Frobenius on E[p].
    const GF& F = GF::with_order(2);
    auto ps = monic_irreducibles(F, 2, "θ");
    for (auto E : {carlitz(F), module(F, {"1", "1"}), module(F, {"theta", "1"})})
        for (auto& f : ps)
            for (auto& p : ps) {
                if (f == p) continue;
                auto lf = local_lfactor(E, f);
                auto reduced = reduce_charpoly_mod(lf.c, p.with_var("t"));
                auto oracle = torsion_frobenius_oracle(E, f, p);
                ASSERT_EQ(reduced, oracle) << E.str() << " f=" << f.str() << " p=" << p.str();
            }
}
