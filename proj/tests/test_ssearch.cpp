#include "ssheight/ssearch.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace ssheight;
using namespace ssheight::ssearch;

namespace {

const curve::WeierstrassModel e11 = curve::WeierstrassModel::parse("0,-1,1,0,0");

// Primes l ≡ a mod q in ascending order, by trial division.
std::vector<std::uint64_t> progression_primes(std::uint64_t a, std::uint64_t q, int count) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t x = a; static_cast<int>(out.size()) < count; x += q) {
        bool prime = x > 1;
        for (std::uint64_t d = 2; d * d <= x && prime; ++d) prime = x % d != 0;
        if (prime) out.push_back(x);
    }
    return out;
}

int euler_symbol(std::uint64_t a, std::uint64_t p) {
    std::uint64_t r = 1, b = a % p, e = (p - 1) / 2;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r == 1 ? 1 : (r == 0 ? 0 : -1);
}

}  // namespace

TEST(Congruence, ConductorElevenThresholdEleven) {
    auto sys = assemble_congruence(11, 11);
    EXPECT_EQ(sys.q, 9240);
    EXPECT_EQ(sys.a % 8, 7);
    EXPECT_EQ(sys.a, 7031);
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), sys.a.get_mpz_t(), sys.q.get_mpz_t());
    EXPECT_EQ(g, 1);
    ASSERT_EQ(sys.conditions.size(), 4u);
    // replay against the first ten primes of the progression with Euler's criterion
    for (std::uint64_t ell : progression_primes(sys.a.get_ui(), 9240, 10)) {
        EXPECT_EQ(ell % 8, 7u);
        for (std::uint64_t p : {2u, 3u, 5u, 7u, 11u}) EXPECT_EQ(euler_symbol(p, ell), 1) << p << " " << ell;
        EXPECT_TRUE(satisfies(sys, mpz_class(static_cast<unsigned long>(ell))));
    }
}

TEST(Congruence, SmallThreshold) {
    auto sys = assemble_congruence(11, 3);
    EXPECT_EQ(sys.q, 264);
    std::vector<std::uint64_t> primes;
    for (const auto& c : sys.conditions) primes.push_back(c.prime);
    EXPECT_EQ(primes, (std::vector<std::uint64_t>{3, 11}));
    for (std::uint64_t ell : progression_primes(sys.a.get_ui(), 264, 10)) {
        EXPECT_EQ(euler_symbol(2, ell), 1);
        EXPECT_EQ(euler_symbol(3, ell), 1);
        EXPECT_EQ(euler_symbol(11, ell), 1);
    }
}

TEST(Congruence, ModulusBoundAndOverflow) {
    for (std::uint64_t N : {11u, 37u, 5077u, 11050u}) {
        for (std::uint64_t n : {11u, 50u, 200u}) {
            auto sys = assemble_congruence(N, n);
            auto pl = arith::primes_up_to(n);
            mpz_class bound = 8 * mpz_class(static_cast<unsigned long>(N)) * arith::product(pl.primes);
            EXPECT_LE(sys.q, bound);
            EXPECT_EQ(sys.q % 8, 0);
            EXPECT_TRUE(sys.a >= 0 && sys.a < sys.q);
        }
    }
    CongruenceOptions tight;
    tight.max_modulus_bits = 64;
    try {
        assemble_congruence(11, 1000, tight);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::modulus_overflow);
    }
    EXPECT_THROW(assemble_congruence(11, 9'702'250'000'000ull), Error);
}

TEST(Progression, SpecExamples) {
    EXPECT_EQ(find_prime_in_ap(7, 24).ell, 7);
    EXPECT_EQ(find_prime_in_ap(1, 4).ell, 5);
    auto sys = assemble_congruence(11, 11);
    auto r = find_prime_in_ap(sys);
    EXPECT_EQ(r.ell, progression_primes(7031, 9240, 1)[0]);
    EXPECT_EQ(r.ell, 43991);
    EXPECT_TRUE(satisfies(sys, r.ell));
    ASSERT_TRUE(r.cap.has_value());
    EXPECT_TRUE(r.within_cap);
    EXPECT_THROW(find_prime_in_ap(2, 4), Error);
    ScanOptions few;
    few.max_candidates = 1;
    try {
        find_prime_in_ap(9, 10, few);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::effort_exhausted);
    }
}

TEST(Progression, Cap) {
    EXPECT_NEAR(least_prime_cap(24).value().to_double(), 7.94e9, 1);
    EXPECT_NEAR(least_prime_cap(9240).value().to_double(), 4.81e12 / 9240, 1e-3);
    auto big = least_prime_cap(200000);
    EXPECT_EQ(big.level(), 1);
    double l = std::log(200000.0);
    EXPECT_NEAR(big.value().to_double(), 0.036 * std::sqrt(200000.0) * l * l * l, 1e-6);
}

TEST(Numerator, SpecExamples) {
    auto a = numerator_N_ell(1728, 7);
    EXPECT_EQ(a.value, mpz_class(5103) * 16579647);
    EXPECT_EQ(a.deg_l, 1u);
    auto b = numerator_N_ell(0, 7);
    EXPECT_EQ(b.value, mpz_class(3375) * 16581375);
    EXPECT_THROW(numerator_N_ell(0, 13), Error);
    // l > max(B_E, 7) gives positive N_l
    mpq_class j(-4096, 11);
    for (std::uint64_t ell : {11u, 19u, 23u, 31u, 43u, 47u}) EXPECT_GT(numerator_N_ell(j, ell).value, 0) << ell;
}

TEST(Extract, Branches) {
    auto im = curve::integral_model(e11);
    try {
        extract_supersingular(im, 1, 43991);
        FAIL();
    } catch (const ExtractionIncomplete& e) {
        EXPECT_EQ(e.kind(), ErrorKind::extraction_incomplete);
        EXPECT_EQ(e.cofactor(), 1);
    }
    // 19 is supersingular for 11a3 and 19 ≡ 3 mod 4
    auto c = extract_supersingular(im, mpz_class(19 * 9), 19);
    EXPECT_EQ(c.p, 19u);
    EXPECT_EQ(c.witness, Witness::ell_itself);
    EXPECT_TRUE(validate(im, c));
    // tampering is caught
    auto bad = c;
    bad.n_ell = mpz_class(9);
    EXPECT_FALSE(validate(im, bad));
    // a cofactor beyond the trial bound is reported
    mpz_class big("170141183460469231731687303715884105727");
    try {
        extract_supersingular(im, big * big, 43991, 1000);
        FAIL();
    } catch (const ExtractionIncomplete& e) {
        EXPECT_EQ(e.cofactor(), big * big);
    }
}

TEST(Search, DirectScanFindsNineteen) {
    auto inv = curve::compute_invariants(e11, 11);
    SearchConfig cfg;
    cfg.mode = SearchConfig::Mode::direct;
    cfg.min_prime = 5;
    auto c = search_supersingular_prime(e11, inv, cfg);
    EXPECT_EQ(c.p, 19u);
    EXPECT_TRUE(validate(curve::integral_model(e11), c));
}

TEST(Search, CmGuard) {
    auto m = curve::WeierstrassModel::parse("0,0,0,1,0");
    auto inv = curve::compute_invariants(m, 32);
    try {
        search_supersingular_prime(m, inv, {});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::cm_curve);
        EXPECT_NE(std::string(e.what()).find("3^-14"), std::string::npos);
    }
    auto inv11 = curve::compute_invariants(e11, 11);
    SearchConfig flagged;
    flagged.cm = true;
    EXPECT_THROW(search_supersingular_prime(e11, inv11, flagged), Error);
}

TEST(Search, InfeasibleThresholdIsStaged) {
    auto inv = curve::compute_invariants(e11, 11);
    SearchConfig cfg;
    cfg.min_prime = 9'702'250'000'000ull;
    try {
        search_supersingular_prime(e11, inv, cfg);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::modulus_overflow);
        EXPECT_EQ(e.stage(), "congruence");
    }
}

TEST(LogBound, BoundpSmall) {
    LogBoundInput in;
    in.N = 11;
    in.n = 11;
    mpfr_const_log2(in.h_j.get(), MPFR_RNDN);
    auto r = ss_prime_log_bound(in, LogBoundVariant::boundp);
    EXPECT_EQ(r.theta_kind, arith::ThetaKind::exact);
    EXPECT_NEAR(r.theta.to_double(), std::log(2310.0), 1e-12);
    long double L = std::log(88.0L * 2310), lnE = std::log(2.5e9L) + 0.018L * std::sqrt(88.0L * 2310) * L * L * L +
                                                 std::log(11.0L * 2310) + 6 * std::log(L) + std::log(std::log(2.0L));
    ASSERT_EQ(r.log_p.level(), 1);
    EXPECT_NEAR(r.log_p.value().to_double(), double(lnE), 1e-9 * double(lnE));
}

TEST(LogBound, Effective) {
    LogBoundInput in;
    in.c = 1;
    in.q = 9240;
    mpfr_const_log2(in.h_j.get(), MPFR_RNDN);
    auto r = ss_prime_log_bound(in, LogBoundVariant::effective);
    double lq = std::log(9240.0);
    double expect = std::pow(9240.0, 2.5) * lq * lq * std::log(2.0);
    ASSERT_EQ(r.log_p.level(), 0);
    EXPECT_NEAR(r.log_p.value().to_double(), expect, 1e-9 * expect);
}

TEST(LogBound, HeightRegimeIsLevelTwo) {
    LogBoundInput in;
    in.N = 11;
    in.n = 9'850'000'000ull;
    mpfr_const_log2(in.h_j.get(), MPFR_RNDN);
    auto r = ss_prime_log_bound(in, LogBoundVariant::boundp);
    EXPECT_EQ(r.theta_kind, arith::ThetaKind::upper_bound);
    Real L(256);
    mpfr_set_d(L.get(), std::log(88.0), MPFR_RNDN);
    mpfr_add(L.get(), L.get(), r.theta.get(), MPFR_RNDN);
    // theta(n) < 1.01624 n only gives 8N e^theta(n) <= e^(1.001e10), the
    // direction an upper bound on log p needs
    EXPECT_LE(L.to_double(), 1.001e10);
    EXPECT_GE(L.to_double(), 1.0009e10);
    ASSERT_EQ(r.log_p.level(), 2);
    EXPECT_NEAR(r.log_p.value().to_double(), 0.5005e10, 0.0001e10);
}

TEST(LogBound, NoJVariant) {
    LogBoundInput in;
    in.N = 11;
    in.n = 11;
    auto r = ss_prime_log_bound(in, LogBoundVariant::boundpnoj);
    double t = 66 * std::log(11.0);
    EXPECT_EQ(r.n, static_cast<std::uint64_t>(std::ceil(t * t)));
    EXPECT_EQ(r.theta_kind, arith::ThetaKind::exact);
    EXPECT_GE(r.log_p.compare(ss_prime_log_bound(LogBoundInput{11, 11, Real(std::log(2.0), 128)}, LogBoundVariant::boundp).log_p), 1);
}
