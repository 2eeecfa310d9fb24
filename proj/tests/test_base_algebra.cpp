#include <gtest/gtest.h>

#include <random>

#include "goss/goss.hpp"

using namespace goss;

namespace {

FqPoly random_poly(std::mt19937_64& rng, const GF& F, int deg, std::string var = "t") {
    std::vector<Fq> c;
    for (int i = 0; i <= deg; ++i) c.emplace_back(F, static_cast<uint32_t>(rng() % F.q()));
    return FqPoly(std::move(c), Fq(F, 0), var);
}

// Reference multiplication in F_p[g]/(m) by schoolbook polynomial arithmetic on digit vectors.
uint32_t ref_mul(const GF& F, uint32_t a, uint32_t b) {
    auto da = F.digits(a), db = F.digits(b);
    uint32_t p = F.p(), e = F.e();
    std::vector<uint32_t> prod(2 * e, 0);
    for (uint32_t i = 0; i < e; ++i)
        for (uint32_t j = 0; j < e; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
    const auto& m = F.modulus();  // monic, low to high
    for (int k = static_cast<int>(2 * e) - 1; k >= static_cast<int>(e); --k) {
        uint32_t c = prod[k];
        if (!c) continue;
        for (uint32_t i = 0; i <= e; ++i) prod[k - e + i] = (prod[k - e + i] + p * p - c * m[i] % p) % p;
    }
    prod.resize(e);
    return F.from_digits(prod);
}

}  // namespace

TEST(Field, TablesMatchSchoolbookArithmetic) {
    for (uint32_t q : {2u, 3u, 4u, 5u, 7u, 8u, 9u, 16u, 25u, 27u}) {
        const GF& F = GF::with_order(q);
        for (uint32_t a = 0; a < q; ++a)
            for (uint32_t b = 0; b < q; ++b) {
                ASSERT_EQ(F.mul(a, b), ref_mul(F, a, b)) << "q=" << q;
                if (b) ASSERT_EQ(F.mul(F.mul(a, F.inv(b)), b), a);
            }
    }
}

TEST(Field, FrobeniusIsAdditiveAndFixesPrimeField) {
    for (uint32_t q : {4u, 8u, 9u, 27u}) {
        const GF& F = GF::with_order(q);
        for (uint32_t a = 0; a < q; ++a) {
            for (uint32_t b = 0; b < q; ++b) ASSERT_EQ(F.frobenius(F.add(a, b)), F.add(F.frobenius(a), F.frobenius(b)));
            ASSERT_EQ(F.pow(a, q), a);
        }
        for (uint32_t c = 0; c < F.p(); ++c) EXPECT_EQ(F.frobenius(F.from_int(c)), F.from_int(c));
    }
}

TEST(Field, RejectsBadOrdersAndModuli) {
    EXPECT_THROW(GF::with_order(6), input_error);
    EXPECT_THROW(GF::with_order(1), input_error);
    EXPECT_THROW(GF::get(2, {1, 0, 1}), input_error);  // x^2 + 1 = (x + 1)^2
    EXPECT_THROW(field_from(4, "g^2+1"), input_error);
    EXPECT_EQ(field_from(4, "g^2+g+1").q(), 4u);
}

TEST(Poly, DivisionIdentityAndGcd) {
    std::mt19937_64 rng(1);
    for (uint32_t q : {2u, 3u, 4u}) {
        const GF& F = GF::with_order(q);
        for (int it = 0; it < 200; ++it) {
            FqPoly a = random_poly(rng, F, static_cast<int>(rng() % 9)), b = random_poly(rng, F, 1 + static_cast<int>(rng() % 5));
            if (b.is_zero()) continue;
            auto [qq, r] = a.divrem(b);
            ASSERT_EQ(qq * b + r, a);
            ASSERT_LT(r.degree(), b.degree());
            FqPoly g = gcd(a, b);
            if (!g.is_zero()) {
                ASSERT_TRUE((a % g).is_zero());
                ASSERT_TRUE((b % g).is_zero());
            }
        }
    }
}

TEST(Irreducibles, CountMatchesTrialDivision) {
    // q = 2, d <= 3: t, t+1, t^2+t+1, t^3+t+1, t^3+t^2+1
    EXPECT_EQ(monic_irreducibles(GF::with_order(2), 3).size(), 5u);
    EXPECT_EQ(monic_irreducibles(GF::with_order(3), 1).size(), 3u);
    for (uint32_t q : {2u, 3u, 4u}) {
        const GF& F = GF::with_order(q);
        int dmax = q == 2 ? 8 : 4;
        auto ps = monic_irreducibles(F, dmax);
        size_t count = 0;
        for (int d = 1; d <= dmax; ++d) {
            uint64_t total = checked_power(q, d, kEnumerationBudget);
            for (uint64_t idx = 0; idx < total; ++idx) {
                FqPoly f = poly_from_index(F, idx, d) + FqPoly::monomial(Fq(F, 1), d);
                count += is_irreducible_trial(f);
            }
        }
        EXPECT_EQ(ps.size(), count) << "q=" << q;
        for (auto& f : ps) ASSERT_TRUE(is_irreducible_trial(f)) << f.str();
    }
}

TEST(Irreducibles, NecklaceIdentity) {
    for (uint32_t q : {2u, 3u, 4u, 5u}) {
        const GF& F = GF::with_order(q);
        int dmax = q == 2 ? 12 : (q == 3 ? 7 : 5);
        auto ps = monic_irreducibles(F, dmax);
        std::vector<uint64_t> by_deg(dmax + 1, 0);
        for (auto& f : ps) ++by_deg[f.degree()];
        for (int d = 1; d <= dmax; ++d) {
            EXPECT_EQ(by_deg[d], necklace_count(q, d)) << "q=" << q << " d=" << d;
            // sum_{e | d} e·N(e) = q^d
            uint64_t s = 0;
            for (int e = 1; e <= d; ++e)
                if (d % e == 0) s += static_cast<uint64_t>(e) * by_deg[e];
            EXPECT_EQ(s, checked_power(q, d, ~0ull));
        }
    }
}

TEST(Irreducibles, EnumerationBudgetIsInfeasible) { EXPECT_THROW(monic_irreducibles(GF::with_order(3), 40), infeasible_error); }

TEST(Laurent, RatioTimesDenominatorRecoversNumerator) {
    std::mt19937_64 rng(2);
    const GF& F = GF::with_order(3);
    for (int it = 0; it < 100; ++it) {
        FqPoly num = random_poly(rng, F, static_cast<int>(rng() % 6)), den = random_poly(rng, F, 1 + static_cast<int>(rng() % 6));
        if (den.is_zero() || num.is_zero()) continue;
        long N = 12;
        Laurent x = Laurent::ratio(num, den, N);
        Laurent back = x * Laurent::from_poly(den, N + den.degree());
        EXPECT_EQ(x.valuation(), den.degree() - num.degree());
        EXPECT_TRUE(back.congruent(Laurent::from_poly(num, back.precision())));
    }
}

TEST(Laurent, InverseAndPrecisionTracking) {
    const GF& F = GF::with_order(2);
    // 1/(1 - u) = 1 + u + u^2 + ... with u = t^-1
    Laurent one_minus_u = Laurent::one(F, 10) - Laurent::monomial(Fq(F, 1), 1, 10);
    Laurent g = one_minus_u.inv();
    for (long k = 0; k < 10; ++k) EXPECT_EQ(g.coeff(k), Fq(F, 1));
    EXPECT_EQ(g.precision(), 10);
    Laurent t = Laurent::from_poly(FqPoly::gen(Fq(F, 1)), 10);
    EXPECT_EQ(t.valuation(), -1);
    EXPECT_EQ((t * g).precision(), 9);  // absolute precision drops by the valuation of t
    EXPECT_TRUE((g - g).is_zero());
    EXPECT_EQ((g - g).valuation(), 10);
}

TEST(Matrix, DeterminantsAgreeAndCayleyHamilton) {
    std::mt19937_64 rng(3);
    const GF& F = GF::with_order(5);
    for (int it = 0; it < 50; ++it) {
        size_t n = 1 + rng() % 5;
        Matrix<Fq> m(n, n, Fq(F, 0));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) m(i, j) = Fq(F, static_cast<uint32_t>(rng() % 5));
        Fq d1 = det_laplace(m, Fq(F, 1)), d2 = det_field(m);
        ASSERT_EQ(d1, d2);
        auto cp = charpoly(m, Fq(F, 1));
        ASSERT_TRUE(eval_at_matrix(cp, m, Fq(F, 1)).is_zero());
        ASSERT_EQ(rank(m) + kernel(m).size(), n);
        if (!d1.is_zero()) ASSERT_EQ(m * inverse(m), Matrix<Fq>::identity(n, Fq(F, 1)));
    }
}

TEST(Parse, RoundTripsAndErrors) {
    const GF& F = GF::with_order(4);
    FqPoly f = parse_poly(F, "g*t^3 + (g+1)*t + 1", "t");
    EXPECT_EQ(parse_poly(F, f.str(), "t"), f);
    EXPECT_EQ(parse_poly(F, "theta^2+theta", "θ").degree(), 2);
    EXPECT_THROW(parse_poly(F, "t^", "t"), input_error);
    EXPECT_THROW(parse_poly(F, "x*y", ""), input_error);
    EXPECT_THROW(parse_scalar(F, "t"), input_error);
}
