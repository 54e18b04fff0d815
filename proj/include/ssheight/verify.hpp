#pragma once

// Numerical verification suites, one per analytic inequality or cited fact.
// Each suite checks every point of its range with certified or exact
// arithmetic and reports counts; none stops at the first failure.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ssheight::verify {

struct SuiteResult {
    std::string suite;
    std::uint64_t checked = 0;
    std::uint64_t failures = 0;
    std::vector<std::string> failure_examples;  // at most a handful
    std::map<std::string, double> stats;        // suite-specific extremes
    std::map<std::string, std::string> params;
    double seconds = 0;

    bool passed() const { return failures == 0 && checked > 0; }
};

struct SuiteOptions {
    std::uint64_t lmax = 1000;        // lemma1; fouvry-murty uses min(lmax, 200) by default
    std::uint64_t dmax = 2000;        // classnum
    std::uint64_t pmax = 1000;        // hasse
    std::uint64_t xmax = 1'000'000;   // theta
    std::uint64_t samples = 500;      // mignotte-sum
    std::uint64_t seed = 1;
    unsigned threads = 1;
};

/// Known suite names, in a stable order.
const std::vector<std::string>& suite_names();

/// Runs one suite by name; throws invalid_argument for unknown names.
SuiteResult run_suite(const std::string& name, const SuiteOptions& opts = {});

/// j(sqrt(-l)) > e^(2 pi sqrt l) and j((1 + sqrt(-l))/2) <= -0.82 e^(pi sqrt l)
/// for primes l ≡ 3 mod 4 in [11, lmax].
SuiteResult lemma1(std::uint64_t lmax);

/// |P_l(j) P_4l(j)| <= exp(3 C sqrt(l) log^2 l + 4 h_l), C = 1e10 log(|j| + 745),
/// for five curve j-invariants and primes l ≡ 3 mod 4 in [7, lmax].
SuiteResult fouvry_murty(std::uint64_t lmax);

/// The conjugate-sum inequality on random samples of degree 2..8 over the
/// epsilon grid 0.05..0.45, the exact F(1) identity, and the explicit
/// (delta) variant on Eisenstein samples of degree 16..28.
SuiteResult mignotte_sum(std::uint64_t samples, std::uint64_t seed);

/// The three auxiliary inequalities on 1000 grid points each.
SuiteResult aux();

/// deg P_D = number of reduced forms for valid D <= dmax, the golden
/// P_3, P_4, P_7, P_28, and h_l <= (sqrt l / pi)(2 + log l) <= 3 sqrt l log l / pi.
SuiteResult classnum(std::uint64_t dmax, unsigned threads);

/// a_p^2 <= 4p for ten curves and their good primes 5 <= p <= pmax.
SuiteResult hasse(std::uint64_t pmax);

/// theta(x) < 1.01624 x for every integer 1 <= x <= xmax.
SuiteResult theta(std::uint64_t xmax);

}  // namespace ssheight::verify
