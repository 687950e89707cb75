#include "rsmorse/verify.hpp"

#include <gtest/gtest.h>

using namespace rsmorse;

namespace {

Rational R(long a, long b = 1) {
    Rational r(a, b);
    r.canonicalize();
    return r;
}

ParamSet reference_params() { return params_from_hat(R(1, 3), R(1, 2), {R(1, 2), R(1, 3), R(1, 5)}); }

}  // namespace

TEST(Sampler, ParametersInsideTheDomain) {
    RationalSampler rs(5);
    for (int i = 0; i < 200; ++i) {
        const ParamSet p = rs.params();
        EXPECT_GT(p.q(), 0);
        EXPECT_LT(p.q(), 1);
        EXPECT_GT(p.t(), 0);
        EXPECT_LT(p.t(), 1);
        for (int r = 0; r < 3; ++r) {
            EXPECT_NE(p.that(r), 0);
            EXPECT_LT(abs(p.that(r)), 1);
        }
    }
}

TEST(Sampler, OpenIntervalExcludesEndpoints) {
    RationalSampler rs(11, 4);
    for (int i = 0; i < 500; ++i) {
        const Rational x = rs.open_interval(R(-1, 2), R(1, 2), true);
        EXPECT_GT(x, R(-1, 2));
        EXPECT_LT(x, R(1, 2));
        EXPECT_NE(x, 0);
    }
}

TEST(Sampler, Reproducible) {
    RationalSampler a(9), b(9);
    for (int i = 0; i < 5; ++i) EXPECT_EQ(to_json(a.params()), to_json(b.params()));
}

TEST(Suites, AllPassAtSmallSize) {
    const VerifyConfig cfg{reference_params(), 2, 3, 1, 2};
    for (const auto& rep : {verify_pieri(cfg), verify_qdiff(cfg), verify_commute(cfg), verify_nonneg(cfg, 20),
                            verify_limits(cfg, 10), verify_balance(cfg)}) {
        EXPECT_FALSE(rep.cases.empty()) << rep.suite;
        EXPECT_TRUE(rep.ok()) << rep.to_json().dump();
    }
}

TEST(Suites, PieriCaseCount) {
    const auto rep = verify_pieri({reference_params(), 2, 2, 0, 3});
    // 4 labels, 2 degrees, 3 points
    EXPECT_EQ(rep.cases.size(), 24u);
}

TEST(Suites, ReportCountsFailures) {
    SuiteReport rep{"demo", {}};
    rep.add("a", true);
    rep.add("b", false, "residual=1");
    EXPECT_FALSE(rep.ok());
    EXPECT_EQ(rep.failed(), 1u);
    EXPECT_EQ(rep.passed(), 1u);
    const json j = rep.to_json();
    EXPECT_EQ(j["failed"], 1);
    EXPECT_EQ(j["cases"][1]["detail"], "residual=1");
}

TEST(Reports, PhaseTableSortedAndUnimodular) {
    const auto rows = phase_table(reference_params(), 3, 20, 4);
    ASSERT_EQ(rows.size(), 20u);
    for (const auto& r : rows) {
        EXPECT_TRUE(std::is_sorted(r.xi.rbegin(), r.xi.rend()));
        EXPECT_LE(r.unimodular_err, 1e-12);
    }
}
