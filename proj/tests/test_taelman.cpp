#include <gtest/gtest.h>

#include "goss/goss.hpp"

using namespace goss;

namespace {

DrinfeldModule module(const GF& F, std::vector<std::string> coeffs) {
    std::vector<FqPoly> a;
    for (auto& s : coeffs) a.push_back(parse_poly(F, s, "θ"));
    return make_drinfeld(F, a);
}

struct Case {
    uint32_t q;
    std::vector<std::string> coeffs;
};

// Modules with zero and nonzero class modules.
std::vector<Case> cases() {
    return {{2, {"1"}},           {3, {"1"}},           {2, {"1", "1"}},           {2, {"theta^4", "1"}},
            {2, {"theta^5", "theta", "1"}}, {3, {"theta^3", "1"}}, {2, {"theta^3", "1"}}};
}

}  // namespace

TEST(Taelman, CarlitzHasTrivialClassModuleAndUnitLogOne) {
    for (uint32_t q : {2u, 3u}) {
        const GF& F = GF::with_order(q);
        auto r = taelman_data(carlitz(F), 16);
        EXPECT_EQ(r.class_dim, 0u);
        EXPECT_TRUE(r.g.is_one());
        Laurent log1 = carlitz_log_one_series(F, 16);
        EXPECT_FALSE(first_disagreement(r.u.with_var("t"), log1.with_var("t")).has_value()) << r.u.str();
    }
}

TEST(Taelman, FittingGeneratorIsCharpolyOfTAction) {
    for (auto& c : cases()) {
        const GF& F = GF::with_order(c.q);
        auto E = module(F, c.coeffs);
        auto r = taelman_data(E, 8);
        ASSERT_TRUE(r.g.is_monic());
        ASSERT_EQ(static_cast<size_t>(r.g.degree()), r.class_dim) << E.str();
        // oracle: det(X - T) over F_q for the t-action matrix
        auto cp = charpoly(r.t_action, Fq(F, 1), "t");
        ASSERT_EQ(cp, r.g) << E.str();
    }
}

TEST(Taelman, SomeModulesHaveNonzeroClassModules) {
    size_t nonzero = 0;
    for (auto& c : cases()) {
        auto r = taelman_data(module(GF::with_order(c.q), c.coeffs), 6);
        nonzero += r.class_dim > 0;
    }
    EXPECT_GE(nonzero, 2u);
}

TEST(Taelman, UnitIsInTheLatticeAndSaturated) {
    for (auto& c : cases()) {
        const GF& F = GF::with_order(c.q);
        auto E = module(F, c.coeffs);
        auto r = taelman_data(E, 10);
        // exp(u) ∈ F_q[θ]: no coefficients strictly below θ^0 at the working precision
        ExpLogData X(E);
        long deg = r.unit_degree;
        Laurent eu = X.exp_eval(r.u.truncate(10 + deg + 2), 10);
        for (long k = 1; k < std::min<long>(eu.precision(), 10); ++k) ASSERT_TRUE(eu.coeff(k).is_zero()) << E.str() << " k=" << k;
        ASSERT_EQ(r.u.lead(), Fq(F, 1));
        ASSERT_EQ(r.kernel_dim, static_cast<size_t>(r.B - r.unit_degree + 1));
    }
}

TEST(Taelman, WindowIndependence) {
    for (auto& c : cases()) {
        const GF& F = GF::with_order(c.q);
        auto E = module(F, c.coeffs);
        auto a = taelman_data(E, 8);
        TaelmanOptions o;
        o.c = a.c + 1;
        o.B = a.B + 2;
        auto b = taelman_data(E, 12, o);
        ASSERT_EQ(a.class_dim, b.class_dim) << E.str();
        ASSERT_EQ(a.g, b.g) << E.str();
        ASSERT_TRUE(a.u.congruent(b.u)) << E.str();
    }
}

TEST(Taelman, ClassNumberFormula) {
    for (auto& c : cases()) {
        const GF& F = GF::with_order(c.q);
        auto E = module(F, c.coeffs);
        long prec = E.rank == 1 ? 10 : 6;
        auto r = verify_cnf(E, prec, 2);
        ASSERT_TRUE(r.pass) << E.str() << "\n lhs " << r.lhs.str() << "\n rhs " << r.rhs.str();
        ASSERT_TRUE(r.alpha.has_value());
        if (E.rank == 1 && E.a[0].is_one()) ASSERT_EQ(*r.alpha, Fq(F, 1));
    }
}
