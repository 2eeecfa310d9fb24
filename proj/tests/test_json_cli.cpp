#include <gtest/gtest.h>

#include <cstdio>
#include <random>
#include <sys/wait.h>

#include "goss/goss.hpp"

using namespace goss;

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    std::string cmd = std::string(GOSS_CLI) + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) throw std::runtime_error("popen failed");
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    int st = pclose(p);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

}  // namespace

TEST(Json, ModuleSpecRoundTrip) {
    auto E = module_from_json(json::parse(R"({"q":4,"modulus":"g^2+g+1","coeffs":["g*theta","1"],"rank":2})"));
    EXPECT_EQ(E.rank, 2);
    auto E2 = module_from_json(module_to_json(E));
    EXPECT_EQ(E2.a, E.a);
    EXPECT_EQ(E2.F, E.F);
    EXPECT_THROW(module_from_json(json::parse(R"({"q":2,"coeffs":["1"],"rank":2})")), input_error);
    EXPECT_THROW(module_from_json(json::parse(R"({"q":2,"coeffs":["1","theta"]})")), hypothesis_error);
}

TEST(Json, ReportsRoundTrip) {
    const GF& F = GF::with_order(2);
    auto E = module_from_json(json::parse(R"({"q":2,"coeffs":["1","1"]})"));
    auto lf = local_lfactor(E, parse_poly(F, "theta^2+theta+1", "θ"));
    auto lf2 = local_factor_from_json(F, to_json(lf));
    EXPECT_EQ(lf2.c, lf.c);
    EXPECT_EQ(lf2.p_poly_str(), lf.p_poly_str());

    auto lv = l_value(E, 6);
    auto lv2 = lvalue_from_json(F, to_json(lv));
    EXPECT_EQ(lv2.value, lv.value);
    EXPECT_EQ(to_json(lv2), to_json(lv));

    auto cc = carlitz_check(F, 6);
    EXPECT_EQ(to_json(carlitz_check_from_json(F, to_json(cc))), to_json(cc));

    auto cnf = verify_cnf(E, 5);
    auto cnf2 = cnf_from_json(F, to_json(cnf));
    EXPECT_EQ(to_json(cnf2), to_json(cnf));
    EXPECT_EQ(cnf2.taelman.g, cnf.taelman.g);

    std::mt19937_64 rng(4);
    auto P = random_arttrace_instance(rng);
    auto P2 = shtuka_from_json(shtuka_to_json(P));
    EXPECT_EQ(shtuka_to_json(P2), shtuka_to_json(P));
    auto at = check_arttrace(P);
    EXPECT_EQ(to_json(arttrace_from_json(P.L, to_json(at, P.L)), P.L), to_json(at, P.L));
    auto Q = random_nilptrace_instance(rng);
    auto nt = check_nilptrace(Q);
    EXPECT_EQ(to_json(trace_from_json(Q.L, to_json(nt, Q.L)), Q.L), to_json(nt, Q.L));
}

TEST(Cli, Irreducibles) {
    auto r = run("irreducibles --q 2 --dmax 3");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find(": 5\n"), std::string::npos) << r.out;
    auto j = run("--format json irreducibles --q 4 --dmax 1");
    EXPECT_EQ(json::parse(j.out).at("count"), 4);
    EXPECT_EQ(run("irreducibles --q 6").code, 3);
}

TEST(Cli, LFactor) {
    auto r = run("lfactor --q 2 --coeffs 1 --prime t");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("P(T) = 1 - (1/t)*T"), std::string::npos) << r.out;
    auto s = run("lfactor --q 2 --coeffs 1,1 --prime theta --format json");
    EXPECT_EQ(json::parse(s.out).at("charpoly"), "X^2 + X + t");
    EXPECT_EQ(run("lfactor --q 2 --coeffs 1 --prime t^2+1").code, 3);
    EXPECT_EQ(run("lfactor --q 2 --coeffs 1,theta --prime t").code, 3);
}

TEST(Cli, LValueIsThreadIndependent) {
    auto a = run("lvalue --q 2 --coeffs 1,1 --prec 6 --threads 1 --format json");
    auto b = run("lvalue --q 2 --coeffs 1,1 --prec 6 --threads 3 --format json");
    ASSERT_EQ(a.code, 0);
    auto ja = json::parse(a.out), jb = json::parse(b.out);
    EXPECT_EQ(ja.at("value"), jb.at("value"));
    for (auto key : {"value", "prec_achieved", "cutoff_degree", "primes", "factors_checked"}) EXPECT_TRUE(ja.contains(key)) << key;
}

TEST(Cli, CarlitzCheckAndCnf) {
    auto r = run("carlitz-check --q 2 --prec 10");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("PASS"), std::string::npos);
    auto v = run("verify-cnf --q 2 --coeffs 1 --prec 8 --format json");
    EXPECT_EQ(v.code, 0);
    auto j = json::parse(v.out);
    EXPECT_EQ(j.at("alpha"), 1);
    EXPECT_EQ(j.at("taelman").at("fitting"), "1");
    auto u = run("units --q 2 --coeffs theta^4,1 --prec 6 --format json");
    EXPECT_EQ(u.code, 0);
    EXPECT_TRUE(json::parse(u.out).at("window").contains("B"));
}

TEST(Cli, TraceCheck) {
    std::string spec = R"('{"lambda":{"p":2,"e_nilpotent":"z^2"},"twists":[-2],"i":[["1"]],"j":[["z*x0*x1"]],"witness":{"ideal":"z","order":2}}')";
    auto r = run("trace-check --spec " + spec);
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("1/1 PASS"), std::string::npos) << r.out;
    auto a = run("trace-check --random 5 --kind art --seed 9 --format json");
    auto b = run("trace-check --random 5 --kind art --seed 9 --format json");
    EXPECT_EQ(a.code, 0);
    auto ja = json::parse(a.out), jb = json::parse(b.out);
    ja.erase("seconds");
    jb.erase("seconds");
    EXPECT_EQ(ja, jb);
    EXPECT_EQ(run("trace-check --spec /nonexistent.json").code, 3);
    EXPECT_EQ(run("trace-check --random 2").code, 3);
}
