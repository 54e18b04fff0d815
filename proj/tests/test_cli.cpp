#include "ssheight/cli.hpp"
#include "ssheight/report.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace ssheight;
using report::json;

namespace {

struct Run {
    int code;
    json report;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    // --help prints text, not a report
    json j = out.str().rfind("{", 0) == 0 ? json::parse(out.str()) : json(nullptr);
    return {code, j, err.str()};
}

const std::vector<std::string> e11 = {"--curve", "0,-1,1,0,0", "--conductor", "11"};

std::vector<std::string> with(std::vector<std::string> head, const std::vector<std::string>& tail) {
    head.insert(head.end(), tail.begin(), tail.end());
    return head;
}

}  // namespace

TEST(Cli, InvariantsReportExactJ) {
    auto r = run(with({"invariants"}, e11));
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.report["outputs"]["j"], "-4096/11");
    EXPECT_EQ(r.report["outputs"]["delta"], "-11");
    EXPECT_EQ(r.report["outputs"]["h_j"]["precision_bits"], 128);
    EXPECT_EQ(r.report["schema"], report::schema_id);
}

TEST(Cli, BoundAtNineteen) {
    auto r = run(with({"bound"}, with(e11, {"--prime", "19", "--assume-surjective"})));
    ASSERT_EQ(r.code, 0) << r.err;
    auto b = report::bound_from_json(r.report["outputs"]["bound"]);
    EXPECT_EQ(b.level(), 0);
    // (log 19)^5 / (1e21 19^44) = 1.2018...e-75
    EXPECT_EQ(b.at_least(mpq_class(1, mpz_class("1" + std::string(75, '0')))), Certainty::yes);
    EXPECT_EQ(b.at_least(mpq_class(12019, mpz_class("1" + std::string(79, '0')))), Certainty::no);
}

TEST(Cli, SemistableCurveNeedsNoSurjectivityFlag) {
    auto r = run(with({"bound"}, with(e11, {"--prime", "19"})));
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.report["outputs"]["surjectivity"], "semistable curve and p >= 11");
}

TEST(Cli, ExceptionListDecides) {
    auto r = run(with({"bound"}, with(e11, {"--prime", "19", "--surjective-exceptions", "5,19"})));
    EXPECT_EQ(r.code, 1);
    EXPECT_FALSE(r.report["error"].is_null());
    r = run(with({"bound"}, with(e11, {"--prime", "19", "--surjective-exceptions", "5"})));
    EXPECT_EQ(r.code, 0) << r.err;
}

TEST(Cli, CmModeIgnoresEverythingElse) {
    for (auto args : std::vector<std::vector<std::string>>{
             {"bound", "--mode", "cm"},
             with({"bound", "--mode", "cm", "--prime", "19", "--constant-exponent", "31"}, e11),
             {"bound", "--mode", "cm", "--conductor", "999"}}) {
        auto r = run(args);
        ASSERT_EQ(r.code, 0) << r.err;
        EXPECT_EQ(r.report["outputs"]["bound"]["exact"], "1/4782969");
    }
}

TEST(Cli, CmCurveTakesCmBranch) {
    auto r = run({"bound", "--curve", "0,0,0,1,0", "--conductor", "64", "--prime", "7"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.report["outputs"]["branch"], "cm");
}

TEST(Cli, AutoFindsNineteen) {
    auto r = run(with({"bound", "--auto"}, e11));
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.report["outputs"]["p"], 19);
    EXPECT_EQ(r.report["certificate"]["p"], 19);
}

TEST(Cli, ConductorOnlyExplicitIsLevelTwo) {
    auto r = run({"bound", "--conductor", "11", "--threshold", "linear"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto& o = r.report["outputs"];
    EXPECT_EQ(o["bound"]["level"], 2);
    EXPECT_EQ(o["n"], "9850000000");
    EXPECT_EQ(o["alternate"]["threshold"], "squared");
    EXPECT_EQ(o["alternate"]["n"], "9702250000000");
}

TEST(Cli, DirectSupersingular) {
    auto r = run(with({"supersingular", "--search", "direct", "--min-prime", "5"}, e11));
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.report["outputs"]["p"], 19);
    EXPECT_EQ(r.report["outputs"]["validated"], true);
    EXPECT_EQ(r.report["certificate"]["witness"], "direct scan");
}

TEST(Cli, ClassPolynomialCoefficients) {
    auto r = run({"classpoly", "--d", "23"});
    ASSERT_EQ(r.code, 0) << r.err;
    json want = {"12771880859375", "-5151296875", "3491750", "1"};
    EXPECT_EQ(r.report["outputs"]["coefficients"], want);
}

TEST(Cli, VerifySuiteSmall) {
    auto r = run({"verify", "--suite", "lemma1", "--lmax", "200"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_GT(r.report["outputs"]["checked"].get<int>(), 0);
    EXPECT_EQ(r.report["outputs"]["failures"], 0);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run({}).code, cli::exit_usage);
    EXPECT_EQ(run({"bound", "--no-such-flag"}).code, cli::exit_usage);
    EXPECT_EQ(run({"bound", "--mode", "foo"}).code, cli::exit_usage);
    EXPECT_EQ(run({"verify", "--suite", "nope"}).code, cli::exit_usage);
    EXPECT_EQ(run({"bound", "--constant-exponent", "25", "--conductor", "11"}).code, cli::exit_usage);
    EXPECT_EQ(run({"--help"}).code, cli::exit_ok);
    // Domain errors: singular model, not supersingular, invalid discriminant.
    EXPECT_EQ(run({"invariants", "--curve", "0,0,0,0,0", "--conductor", "11"}).code, cli::exit_domain);
    EXPECT_EQ(run(with({"bound", "--prime", "23"}, e11)).code, cli::exit_domain);
    EXPECT_EQ(run({"classpoly", "--d", "5"}).code, cli::exit_domain);
    // Conductor 11 is not the conductor of a curve with discriminant 65.
    EXPECT_EQ(run({"invariants", "--curve", "1,0,0,-1,0", "--conductor", "11"}).code, cli::exit_domain);
}

TEST(Cli, ExhaustionExitsTwo) {
    // A scan limit of 10 stops before 19.
    auto r = run(with({"supersingular", "--search", "direct", "--effort", "1e-7"}, e11));
    EXPECT_EQ(r.code, cli::exit_exhausted);
    EXPECT_EQ(r.report["error"]["kind"], "effort_exhausted");
    EXPECT_EQ(r.report["error"]["stage"], "scan");
    EXPECT_TRUE(r.report["outputs"].is_null());
}

TEST(Cli, BadPrecisionIsUsage) {
    setenv("SSHEIGHT_PRECISION", "12", 1);
    EXPECT_EQ(run(with({"invariants"}, e11)).code, cli::exit_usage);
    setenv("SSHEIGHT_PRECISION", "300", 1);
    auto r = run(with({"invariants"}, e11));
    unsetenv("SSHEIGHT_PRECISION");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.report["outputs"]["h_j"]["precision_bits"], 300);
}

TEST(Report, BoundRoundTrip) {
    for (auto args : std::vector<std::vector<std::string>>{
             with({"bound", "--prime", "19"}, e11),
             {"bound", "--conductor", "11"},
             with({"bound", "--mode", "semistable"}, e11),
             {"bound", "--mode", "cm"}}) {
        auto r = run(args);
        ASSERT_EQ(r.code, 0) << r.err;
        const json& printed = r.report["outputs"]["bound"];
        json again = report::to_json(report::bound_from_json(printed));
        EXPECT_EQ(again["level"], printed["level"]);
        EXPECT_EQ(again.contains("exact"), printed.contains("exact"));
        if (printed.contains("exact")) EXPECT_EQ(again["exact"], printed["exact"]);
        // Re-rounding the parsed value may move the last printed digit.
        EXPECT_EQ(again["value"].get<std::string>().substr(0, 26),
                  printed["value"].get<std::string>().substr(0, 26));
    }
}

TEST(Report, MalformedBound) {
    EXPECT_THROW(report::bound_from_json(json{{"level", 3}, {"value", "1"}, {"slack", "0"}}), Error);
    EXPECT_THROW(report::bound_from_json(json{{"level", 0}, {"value", "abc"}, {"slack", "0"}}), Error);
    EXPECT_THROW(report::bound_from_json(json{{"value", "1"}}), Error);
}
