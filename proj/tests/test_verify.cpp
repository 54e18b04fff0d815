#include "ssheight/verify.hpp"

#include "ssheight/error.hpp"

#include <gtest/gtest.h>

using namespace ssheight;
using namespace ssheight::verify;

TEST(Suites, NamesAreStable) {
    std::vector<std::string> want = {"lemma1", "fouvry-murty", "mignotte-sum", "aux", "classnum", "hasse", "theta"};
    EXPECT_EQ(suite_names(), want);
    EXPECT_THROW(run_suite("nope"), Error);
}

TEST(Suites, LemmaOneSmallRange) {
    // primes l ≡ 3 mod 4 in [11, 100]: 11 19 23 31 43 47 59 67 71 79 83
    auto r = lemma1(100);
    EXPECT_EQ(r.checked, 22u);
    EXPECT_EQ(r.failures, 0u);
    EXPECT_GT(r.stats["min_ratio_second"], 0.82);
}

TEST(Suites, FouvryMurtySmallRange) {
    auto r = fouvry_murty(60);
    EXPECT_GT(r.checked, 0u);
    EXPECT_EQ(r.failures, 0u) << (r.failure_examples.empty() ? "" : r.failure_examples[0]);
}

TEST(Suites, MignotteSumIsSeeded) {
    auto a = mignotte_sum(25, 7), b = mignotte_sum(25, 7);
    EXPECT_EQ(a.failures, 0u);
    EXPECT_EQ(a.checked, b.checked);
    EXPECT_EQ(a.stats, b.stats);
    EXPECT_GE(a.stats["identity_checks"], 25);
}

TEST(Suites, AuxGrids) {
    auto r = aux();
    EXPECT_EQ(r.checked, 3000u);
    EXPECT_EQ(r.failures, 0u);
}

TEST(Suites, ClassNumbersSmall) {
    auto r = classnum(200, 2);
    EXPECT_EQ(r.failures, 0u);
    // valid D <= 200: D ≡ 0, 3 mod 4, i.e. 100 of them
    EXPECT_EQ(r.stats["discriminants"], 100);
}

TEST(Suites, HasseSmall) {
    auto r = hasse(100);
    EXPECT_GT(r.checked, 150u);
    EXPECT_EQ(r.failures, 0u);
    EXPECT_LE(r.stats["max_abs_ap_over_2sqrtp"], 1.0);
}

TEST(Suites, ThetaCountsEveryInteger) {
    auto r = theta(5000);
    EXPECT_EQ(r.checked, 5000u);
    EXPECT_EQ(r.failures, 0u);
    // theta(x)/x peaks well below the constant on this range
    EXPECT_LT(r.stats["max_theta_over_x"], 1.0);
}

TEST(Suites, EmptyRangeDoesNotPass) {
    auto r = lemma1(10);
    EXPECT_EQ(r.checked, 0u);
    EXPECT_FALSE(r.passed());
}
